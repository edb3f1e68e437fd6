"""Integrand AST.

Atoms are immutable dataclasses; ``str(expr)`` prints valid DSL text that
parses back to an equal tree. Source spans are carried for diagnostics but
excluded from equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import AffineForm


def _exponent_text(e: AffineForm) -> str:
    if not e.sym_coeffs and e.const >= 0 and e.const.denominator == 1:
        return str(e.const)
    if e.is_constant and e.const.denominator == 1:
        return f"({e.const})"
    text = str(e).replace(" ", "")
    if len(e.sym_coeffs) == 1 and not e.const and e.sym_coeffs[0][1] == 1:
        return text
    return f"({text})"


@dataclass(frozen=True)
class Coeff:
    """Positive-or-negative rational times a product of parameter powers."""

    rational: Fraction = Fraction(1)
    params: tuple = ()  # ((name, int power), ...) sorted, no zero powers

    def __post_init__(self):
        acc: dict[str, int] = {}
        for name, k in self.params:
            acc[name] = acc.get(name, 0) + int(k)
        object.__setattr__(self, "params", tuple(sorted((n, k) for n, k in acc.items() if k)))
        object.__setattr__(self, "rational", Fraction(self.rational))

    def __mul__(self, other: Coeff) -> Coeff:
        return Coeff(self.rational * other.rational, self.params + other.params)

    def __neg__(self) -> Coeff:
        return Coeff(-self.rational, self.params)

    @property
    def is_one(self) -> bool:
        return self.rational == 1 and not self.params

    def times_x(self, power: Fraction) -> str:
        """Monomial text ``c*x^p``; the sign of the rational is not printed."""
        parts = []
        r = abs(self.rational)
        if r != 1:
            parts.append(str(r))
        for name, k in self.params:
            parts.append(name if k == 1 else f"{name}^{k}" if k > 0 else f"{name}^({k})")
        if power == 1:
            parts.append("x")
        elif power != 0:
            parts.append(f"x^{power}" if power > 0 and power.denominator == 1 else f"x^({power})")
        return "*".join(parts) or "1"


def _signed(c: Coeff) -> str:
    text = c.times_x(Fraction(1))
    return f"-{text}" if c.rational < 0 else text


class Expr:
    """Base class for integrand nodes."""

    span: tuple[int, int] | None

    def atoms(self) -> list[Expr]:
        return [self]


@dataclass(frozen=True)
class Power(Expr):
    """``x ** exponent``."""

    exponent: AffineForm
    span: tuple | None = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        if self.exponent == AffineForm.constant(1):
            return "x"
        return f"x^{_exponent_text(self.exponent)}"


@dataclass(frozen=True)
class Exp(Expr):
    """``exp(-coeff * x**power)``."""

    coeff: Coeff
    power: Fraction = Fraction(1)
    span: tuple | None = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        sign = "-" if self.coeff.rational > 0 else ""
        return f"exp({sign}{self.coeff.times_x(self.power)})"


@dataclass(frozen=True)
class Sin(Expr):
    coeff: Coeff
    span: tuple | None = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        return f"sin({_signed(self.coeff)})"


@dataclass(frozen=True)
class Cos(Expr):
    coeff: Coeff
    span: tuple | None = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        return f"cos({_signed(self.coeff)})"


@dataclass(frozen=True)
class BesselJ(Expr):
    order: AffineForm
    coeff: Coeff
    span: tuple | None = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        order = str(self.order).replace(" ", "")
        return f"besselj({order}, {_signed(self.coeff)})"


@dataclass(frozen=True)
class MultinomialPower(Expr):
    """``(sum coeff_i * x**p_i) ** exponent``; terms are ``(Coeff, Fraction)``."""

    terms: tuple
    exponent: AffineForm
    span: tuple | None = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        body = ""
        for i, (c, p) in enumerate(self.terms):
            mono = c.times_x(p)
            if c.rational < 0:
                body += f"-{mono}" if i == 0 else f" - {mono}"
            else:
                body += mono if i == 0 else f" + {mono}"
        if self.exponent == AffineForm.constant(1):
            return f"({body})"
        return f"({body})^{_exponent_text(self.exponent)}"


@dataclass(frozen=True)
class Product(Expr):
    factors: tuple
    span: tuple | None = field(default=None, compare=False, repr=False)

    def atoms(self) -> list[Expr]:
        out: list[Expr] = []
        for f in self.factors:
            out.extend(f.atoms())
        return out

    def __str__(self) -> str:
        return " * ".join(str(f) for f in self.factors)


@dataclass(frozen=True)
class Sum(Expr):
    """Signed sum of product-form integrands; ``signs`` holds +1/-1."""

    terms: tuple
    signs: tuple
    span: tuple | None = field(default=None, compare=False, repr=False)

    def atoms(self) -> list[Expr]:
        out: list[Expr] = []
        for t in self.terms:
            out.extend(t.atoms())
        return out

    def __str__(self) -> str:
        text = ""
        for i, (t, s) in enumerate(zip(self.terms, self.signs)):
            if i == 0:
                text = str(t) if s > 0 else f"-{t}"
            else:
                text += f" + {t}" if s > 0 else f" - {t}"
        return text


ATOM_TYPES = (Power, Exp, Sin, Cos, BesselJ, MultinomialPower)
OSCILLATORY = (Sin, Cos, BesselJ)


def names_in(e: Expr) -> tuple[set[str], set[str]]:
    """Return ``(params, symbolic_consts)`` referenced by ``e``."""
    params: set[str] = set()
    consts: set[str] = set()
    for a in e.atoms():
        if isinstance(a, Power):
            consts.update(a.exponent.symbols())
        elif isinstance(a, (Exp, Sin, Cos)):
            params.update(n for n, _ in a.coeff.params)
        elif isinstance(a, BesselJ):
            consts.update(a.order.symbols())
            params.update(n for n, _ in a.coeff.params)
        elif isinstance(a, MultinomialPower):
            consts.update(a.exponent.symbols())
            for c, _ in a.terms:
                params.update(n for n, _ in c.params)
    return params, consts
