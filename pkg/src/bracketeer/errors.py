"""Exception hierarchy.

Input errors (bad DSL text, unbound names) map to CLI exit code 2, region
failures to 3 and numeric failures to 4; see :mod:`bracketeer.cli`.
"""

from __future__ import annotations


class BracketeerError(Exception):
    """Base class for every error raised by the package."""


# -- input -----------------------------------------------------------------


class InputError(BracketeerError):
    pass


class DSLSyntaxError(InputError):
    def __init__(self, message: str, span: tuple[int, int]):
        super().__init__(f"{message} at {span[0]}..{span[1]}")
        self.message = message
        self.span = span


class UnsupportedAtom(InputError):
    def __init__(self, name: str, span: tuple[int, int] | None = None):
        where = f" at {span[0]}..{span[1]}" if span else ""
        super().__init__(f"unsupported atom {name!r}{where}")
        self.name = name
        self.span = span


class MultipleVariables(InputError):
    def __init__(self, name: str, span: tuple[int, int]):
        super().__init__(
            f"{name!r} used as a second integration variable at {span[0]}..{span[1]}"
        )
        self.name = name
        self.span = span


class UnsupportedStructure(InputError):
    pass


class UnboundParameter(InputError):
    def __init__(self, name: str):
        super().__init__(f"no binding for {name!r}")
        self.name = name


# -- symbolic engine ---------------------------------------------------------


class EngineError(BracketeerError):
    pass


class IndexCollision(EngineError):
    pass


class FewerThanTwoTerms(EngineError):
    pass


class NegativeIndex(EngineError):
    pass


class NoSolutions(EngineError):
    pass


class NoConvergentSolution(BracketeerError):
    """No series solution converges at the given bindings."""


class EmptyList(EngineError, ValueError):
    pass


# -- Pochhammer / numerics ---------------------------------------------------


class NegativeIntegerBase(BracketeerError, ValueError):
    def __init__(self, base):
        super().__init__(
            f"Pochhammer base {base} is a non-positive integer; use the regularized rule"
        )
        self.base = base


class NumericError(BracketeerError):
    pass


class PoleAt(NumericError, ValueError):
    def __init__(self, x):
        super().__init__(f"gamma pole at {x}")
        self.x = x


class DidNotConverge(NumericError):
    def __init__(self, max_terms: int, message: str | None = None):
        super().__init__(message or f"series did not converge within {max_terms} terms")
        self.max_terms = max_terms


class DivergentTermEncountered(NumericError):
    pass


class OracleFailedToConverge(NumericError):
    pass
