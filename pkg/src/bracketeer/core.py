"""Exact symbolic data model: affine forms, gamma products and series.

Every coefficient here is a :class:`fractions.Fraction`. Floating point only
enters in :mod:`bracketeer.numeric` and friends.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import UnboundParameter

Rational = Union[Fraction, int]


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(value)
    return Fraction(value)


@dataclass(frozen=True, order=True)
class IndexVar:
    """Summation index over the natural numbers."""

    id: int
    name: str = field(default="", compare=False)

    def __str__(self) -> str:
        return self.name or f"n{self.id}"


@dataclass(frozen=True)
class SymbolicConst:
    name: str
    assumed_value: Fraction | None = None


@dataclass(frozen=True)
class Param:
    name: str
    value: float | None = None


def _pairs(data) -> Iterable:
    if data is None:
        return ()
    if isinstance(data, Mapping):
        return data.items()
    return data


@dataclass(frozen=True)
class AffineForm:
    """``sum(c_i * n_i) + sum(d_j * s_j) + const`` with rational coefficients.

    Zero coefficients are dropped and terms sorted on construction, so
    structural equality is mathematical equality.
    """

    index_coeffs: tuple = ()
    const: Fraction = Fraction(0)
    sym_coeffs: tuple = ()

    def __post_init__(self):
        idx: dict[IndexVar, Fraction] = {}
        for var, c in _pairs(self.index_coeffs):
            idx[var] = idx.get(var, Fraction(0)) + as_fraction(c)
        sym: dict[str, Fraction] = {}
        for name, c in _pairs(self.sym_coeffs):
            sym[name] = sym.get(name, Fraction(0)) + as_fraction(c)
        object.__setattr__(
            self, "index_coeffs", tuple(sorted((v, c) for v, c in idx.items() if c))
        )
        object.__setattr__(
            self, "sym_coeffs", tuple(sorted((s, c) for s, c in sym.items() if c))
        )
        object.__setattr__(self, "const", as_fraction(self.const))

    # -- constructors ----------------------------------------------------------

    @classmethod
    def constant(cls, value) -> AffineForm:
        return cls(const=as_fraction(value))

    @classmethod
    def index(cls, var: IndexVar, coeff=1) -> AffineForm:
        return cls(index_coeffs={var: coeff})

    @classmethod
    def symbol(cls, name: str, coeff=1) -> AffineForm:
        return cls(sym_coeffs={name: coeff})

    # -- algebra ---------------------------------------------------------------

    def __add__(self, other) -> AffineForm:
        if not isinstance(other, AffineForm):
            other = AffineForm.constant(other)
        return AffineForm(
            self.index_coeffs + other.index_coeffs,
            self.const + other.const,
            self.sym_coeffs + other.sym_coeffs,
        )

    __radd__ = __add__

    def __neg__(self) -> AffineForm:
        return self.scale(-1)

    def __sub__(self, other) -> AffineForm:
        if not isinstance(other, AffineForm):
            other = AffineForm.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> AffineForm:
        return (-self) + other

    def scale(self, factor) -> AffineForm:
        f = as_fraction(factor)
        return AffineForm(
            tuple((v, c * f) for v, c in self.index_coeffs),
            self.const * f,
            tuple((s, c * f) for s, c in self.sym_coeffs),
        )

    def __mul__(self, factor) -> AffineForm:
        if isinstance(factor, AffineForm):
            return NotImplemented
        return self.scale(factor)

    __rmul__ = __mul__

    def substitute(self, subs: Mapping[IndexVar, AffineForm]) -> AffineForm:
        out = AffineForm(const=self.const, sym_coeffs=self.sym_coeffs)
        for var, c in self.index_coeffs:
            if var in subs:
                out = out + subs[var].scale(c)
            else:
                out = out + AffineForm.index(var, c)
        return out

    # -- queries ---------------------------------------------------------------

    def coeff(self, var: IndexVar) -> Fraction:
        for v, c in self.index_coeffs:
            if v == var:
                return c
        return Fraction(0)

    def sym_coeff(self, name: str) -> Fraction:
        for s, c in self.sym_coeffs:
            if s == name:
                return c
        return Fraction(0)

    def indices(self) -> tuple[IndexVar, ...]:
        return tuple(v for v, _ in self.index_coeffs)

    def symbols(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.sym_coeffs)

    @property
    def is_constant(self) -> bool:
        return not self.index_coeffs and not self.sym_coeffs

    def slope(self) -> Fraction:
        """Sum of all index coefficients."""
        return sum((c for _, c in self.index_coeffs), Fraction(0))

    def evaluate(self, point: Mapping[IndexVar, int] = {}, syms: Mapping[str, Fraction] = {}) -> Fraction:
        total = self.const
        for v, c in self.index_coeffs:
            if v not in point:
                raise UnboundParameter(str(v))
            total += c * point[v]
        for s, c in self.sym_coeffs:
            if s not in syms:
                raise UnboundParameter(s)
            total += c * as_fraction(syms[s])
        return total

    def sort_key(self):
        return (
            tuple((v.id, c) for v, c in self.index_coeffs),
            self.sym_coeffs,
            self.const,
        )

    def relabel(self, mapping: Mapping[IndexVar, IndexVar]) -> AffineForm:
        return AffineForm(
            tuple((mapping.get(v, v), c) for v, c in self.index_coeffs),
            self.const,
            self.sym_coeffs,
        )

    def __str__(self) -> str:
        parts: list[str] = []
        for name, c in list((str(v), c) for v, c in self.index_coeffs) + list(self.sym_coeffs):
            if c == 1:
                parts.append(f"+ {name}")
            elif c == -1:
                parts.append(f"- {name}")
            elif c < 0:
                parts.append(f"- {-c}*{name}")
            else:
                parts.append(f"+ {c}*{name}")
        if self.const or not parts:
            parts.append(f"- {-self.const}" if self.const < 0 else f"+ {self.const}")
        text = " ".join(parts)
        if text.startswith("+ "):
            return text[2:]
        return "-" + text[2:]


def _merge(pairs, key=lambda k: k):
    acc: dict = {}
    for k, v in pairs:
        acc[k] = acc[k] + v if k in acc else v
    return acc


@dataclass(frozen=True)
class GammaProduct:
    """Term coefficient of a bracket series.

    ``prefactor * prod(param ** exp) * prod(Gamma(arg) ** e) * prod(base ** exp)
    * prod(phi_n for n in indicators)``.
    """

    prefactor: Fraction = Fraction(1)
    param_powers: tuple = ()
    gamma_factors: tuple = ()
    indicators: tuple = ()
    numeric_consts: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "prefactor", as_fraction(self.prefactor))
        pp = _merge(_pairs(self.param_powers))
        object.__setattr__(
            self,
            "param_powers",
            tuple(sorted((k, v) for k, v in pp.items() if v != AffineForm())),
        )
        gf = _merge(_pairs(self.gamma_factors))
        object.__setattr__(
            self,
            "gamma_factors",
            tuple(sorted(((a, e) for a, e in gf.items() if e), key=lambda t: t[0].sort_key())),
        )
        object.__setattr__(self, "indicators", tuple(sorted(set(self.indicators))))
        nc = _merge((as_fraction(b), e) for b, e in _pairs(self.numeric_consts))
        for base in nc:
            if base <= 0:
                raise ValueError(f"numeric base must be positive, got {base}")
        object.__setattr__(
            self,
            "numeric_consts",
            tuple(sorted((b, e) for b, e in nc.items() if b != 1 and e != AffineForm())),
        )

    def __mul__(self, other: GammaProduct) -> GammaProduct:
        if not isinstance(other, GammaProduct):
            return GammaProduct(
                self.prefactor * as_fraction(other),
                self.param_powers,
                self.gamma_factors,
                self.indicators,
                self.numeric_consts,
            )
        return GammaProduct(
            self.prefactor * other.prefactor,
            self.param_powers + other.param_powers,
            self.gamma_factors + other.gamma_factors,
            self.indicators + other.indicators,
            self.numeric_consts + other.numeric_consts,
        )

    __rmul__ = __mul__

    def with_gamma(self, arg: AffineForm, exponent: int = 1) -> GammaProduct:
        return GammaProduct(
            self.prefactor,
            self.param_powers,
            self.gamma_factors + ((arg, exponent),),
            self.indicators,
            self.numeric_consts,
        )

    def without_indicator(self, var: IndexVar) -> GammaProduct:
        return GammaProduct(
            self.prefactor,
            self.param_powers,
            self.gamma_factors,
            tuple(v for v in self.indicators if v != var),
            self.numeric_consts,
        )

    def _map_forms(self, fn) -> GammaProduct:
        return GammaProduct(
            self.prefactor,
            tuple((p, fn(e)) for p, e in self.param_powers),
            tuple((fn(a), e) for a, e in self.gamma_factors),
            self.indicators,
            tuple((b, fn(e)) for b, e in self.numeric_consts),
        )

    def substitute(self, subs: Mapping[IndexVar, AffineForm]) -> GammaProduct:
        """Substitute into every affine form. Indicators are left alone."""
        return self._map_forms(lambda f: f.substitute(subs))

    def relabel(self, mapping: Mapping[IndexVar, IndexVar]) -> GammaProduct:
        out = self._map_forms(lambda f: f.relabel(mapping))
        return GammaProduct(
            out.prefactor,
            out.param_powers,
            out.gamma_factors,
            tuple(mapping.get(v, v) for v in self.indicators),
            out.numeric_consts,
        )

    def forms(self) -> list[AffineForm]:
        return (
            [e for _, e in self.param_powers]
            + [a for a, _ in self.gamma_factors]
            + [e for _, e in self.numeric_consts]
        )

    def indices(self) -> tuple[IndexVar, ...]:
        found = set(self.indicators)
        for f in self.forms():
            found.update(f.indices())
        return tuple(sorted(found))

    def symbols(self) -> tuple[str, ...]:
        found: set[str] = set()
        for f in self.forms():
            found.update(f.symbols())
        return tuple(sorted(found))

    def params(self) -> tuple[str, ...]:
        return tuple(p for p, _ in self.param_powers)

    def factor_strings(self) -> list[str]:
        out = []
        if self.prefactor != 1:
            out.append(str(self.prefactor))
        if self.indicators:
            out.append("phi[" + ",".join(str(v) for v in self.indicators) + "]")
        for p, e in self.param_powers:
            out.append(f"{p}^({e})")
        for b, e in self.numeric_consts:
            out.append(f"({b})^({e})")
        for a, e in self.gamma_factors:
            out.append(f"Gamma({a})" if e == 1 else f"Gamma({a})^{e}")
        return out or ["1"]

    def __str__(self) -> str:
        return " * ".join(self.factor_strings())


@dataclass(frozen=True)
class IndexedSeries:
    """``sum over indices of term * x**x_exponent`` plus any pending brackets."""

    indices: tuple
    term: GammaProduct
    x_exponent: AffineForm
    pending_brackets: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(self.indices))
        object.__setattr__(self, "pending_brackets", tuple(self.pending_brackets))
        reach = set(self.term.indices()) | set(self.x_exponent.indices())
        for b in self.pending_brackets:
            reach.update(b.indices())
        if reach != set(self.indices):
            raise ValueError(
                f"series indices {list(map(str, self.indices))} do not match "
                f"those used by the term {sorted(map(str, reach))}"
            )
        if len(set(self.indices)) != len(self.indices):
            raise ValueError("duplicate index ids")


@dataclass(frozen=True)
class BracketSeries:
    indices: tuple
    term: GammaProduct
    brackets: tuple
    origin: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(self.indices))
        object.__setattr__(self, "brackets", tuple(self.brackets))
        if len(set(self.indices)) != len(self.indices):
            raise ValueError("duplicate index ids")

    @property
    def index(self) -> int:
        return len(self.indices) - len(self.brackets)

    def relabel(self, mapping: Mapping[IndexVar, IndexVar], order=None) -> BracketSeries:
        """Rename indices; ``order`` optionally gives the new index list order."""
        indices = tuple(mapping.get(v, v) for v in self.indices)
        if order is not None:
            indices = tuple(order)
        return BracketSeries(
            indices,
            self.term.relabel(mapping),
            tuple(b.relabel(mapping) for b in self.brackets),
            self.origin,
        )


class Kind(enum.Enum):
    NULL = "null"
    DIVERGENT = "divergent"
    CONVERGENT = "convergent"
    FINITE_VALUE = "finite_value"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    ratio: float | None = None
    note: str = ""

    def __str__(self) -> str:
        if self.kind is Kind.CONVERGENT and self.ratio is not None:
            return f"convergent(ratio~{self.ratio:.6g})"
        return self.kind.value


@dataclass(frozen=True)
class SeriesSolution:
    free_indices: tuple
    term: GammaProduct
    weight: Fraction
    substitutions: tuple
    classification: Classification | None = None

    def __post_init__(self):
        object.__setattr__(self, "free_indices", tuple(self.free_indices))
        object.__setattr__(self, "weight", as_fraction(self.weight))
        if self.weight <= 0:
            raise ValueError("weight must be positive")
        if not self.free_indices:
            if self.term.indices():
                raise ValueError("a solution without free indices must not mention indices")
            if self.classification is None:
                object.__setattr__(self, "classification", Classification(Kind.FINITE_VALUE))

    @property
    def eliminated(self) -> tuple:
        return tuple(v for v, _ in self.substitutions)


@dataclass
class EvaluationReport:
    engine_value: float | None
    oracle_value: float | None
    abs_error: float | None
    rel_error: float | None
    terms_used: int
    classification_log: list
    verdict: str
    tolerance: float
    reasons: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def normalize_bindings(bindings: Mapping[str, object] | None) -> dict[str, Fraction]:
    """Bindings as exact rationals; floats are converted exactly."""
    out: dict[str, Fraction] = {}
    for k, v in (bindings or {}).items():
        if isinstance(v, str):
            v = Fraction(v)
        out[k] = as_fraction(v)
    return out
