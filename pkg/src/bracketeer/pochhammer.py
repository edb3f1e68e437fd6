"""Pochhammer symbols and limit-regularized evaluation of gamma products.

The classical negative-index rule ``(a)_{-m} = (-1)^m / (1-a)_m`` is
discontinuous at negative-integer ``a``: approached along ``a -> -km`` alone
it gives ``(-1)^m (km)! / ((k+1)m)!``, while letting base and index move
together, ``(-k(m+eps))_{-(m+eps)}`` as ``eps -> 0``, gives ``k/(k+1)`` times
that. Series produced by bracket elimination need the second value.

:func:`regularized_term_value` generalizes this: every free index is shifted
by one shared ``eps`` and the gamma product's ``eps -> 0`` limit is taken,
so gamma poles cancel in ratios with their exact slopes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Mapping

from .core import GammaProduct, IndexVar, as_fraction
from .errors import NegativeIntegerBase, NumericError, PoleAt, UnboundParameter
from .special import SQRT_PI, ScaledFloat, gamma_real, log_abs_gamma

# Above these sizes exact big-integer arithmetic is replaced by floats.
EXACT_GAMMA_LIMIT = 3000
EXACT_POWER_LIMIT = 4096


def pochhammer(a, k: int):
    """Rising factorial ``a (a+1) ... (a+k-1)``; exact for rational ``a``."""
    if k < 0:
        raise ValueError("k must be non-negative; use poch_negative")
    out = Fraction(1) if isinstance(a, (int, Fraction)) else 1.0
    for j in range(k):
        out *= a + j
    return out


def _is_nonpositive_int(a) -> bool:
    return a <= 0 and a == math.floor(a)


def poch_negative(a, m: int):
    """``(a)_{-m} = (-1)^m / (1-a)_m``, i.e. ``Gamma(a-m)/Gamma(a)``.

    Raises :class:`NegativeIntegerBase` when ``a`` is 0, -1, -2, ...: there
    the value depends on how the limit is taken.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    if _is_nonpositive_int(a):
        raise NegativeIntegerBase(a)
    if a == math.floor(a) and 1 <= a <= m:
        raise PoleAt(a - m)
    if isinstance(a, (int, Fraction)):
        a = as_fraction(a)
        return Fraction((-1) ** m) / pochhammer(1 - a, m)
    return (-1) ** m / pochhammer(1.0 - a, m)


def poch_E4(k: int, m: int) -> Fraction:
    """``(-km)_{-m} = k/(k+1) * (-1)^m (km)! / ((k+1)m)!`` (limit value)."""
    if k < 1 or m < 0:
        raise ValueError("need k >= 1 and m >= 0")
    return Fraction(k, k + 1) * Fraction((-1) ** m * factorial(k * m), factorial((k + 1) * m))


def direct_poch_negative_integer(k: int, m: int) -> Fraction:
    """``(-1)^m (km)! / ((k+1)m)!``: the classical rule continued in the base only."""
    if k < 1 or m < 1:
        raise ValueError("need k >= 1 and m >= 1")
    return Fraction((-1) ** m * factorial(k * m), factorial((k + 1) * m))


class TermKind(enum.Enum):
    FINITE = "finite"
    ZERO = "zero"
    DIVERGENT = "divergent"


@dataclass(frozen=True)
class TermValue:
    """Value of one series term.

    ``ZERO`` marks a structural zero (an uncancelled reciprocal pole); it is
    numerically equal to ``Finite(0.0)``. ``exact`` holds the exact rational
    coefficient of ``pi ** (sqrt_pi_power / 2)`` when no float factor was
    involved.
    """

    kind: TermKind
    value: float = 0.0
    exact: Fraction | None = None
    sqrt_pi_power: int = 0

    def __float__(self) -> float:
        if self.kind is TermKind.DIVERGENT:
            return math.inf
        return self.value

    @property
    def is_zero(self) -> bool:
        return self.kind is TermKind.ZERO

    @property
    def is_divergent(self) -> bool:
        return self.kind is TermKind.DIVERGENT


ZERO = TermValue(TermKind.ZERO, 0.0, Fraction(0))
DIVERGENT = TermValue(TermKind.DIVERGENT, math.inf)


def gamma_exact(v: Fraction) -> tuple[Fraction, int] | None:
    """``Gamma(v)`` as ``(q, h)`` meaning ``q * sqrt(pi)**h`` for integer and
    half-integer ``v`` of moderate size; ``None`` otherwise."""
    if abs(v) > EXACT_GAMMA_LIMIT:
        return None
    if v.denominator == 1:
        if v <= 0:
            raise PoleAt(v)
        return Fraction(factorial(int(v) - 1)), 0
    if v.denominator == 2:
        k = int(v - Fraction(1, 2))
        if k >= 0:
            return Fraction(factorial(2 * k), 4 ** k * factorial(k)), 1
        j = -k
        return Fraction((-4) ** j * factorial(j), factorial(2 * j)), 1
    return None


def _binding(bindings: Mapping[str, Fraction], name: str) -> Fraction:
    if name not in bindings:
        raise UnboundParameter(name)
    return as_fraction(bindings[name])


class _Acc:
    __slots__ = ("rational", "sqrt_pi", "floats", "has_float", "numeric_zero")

    def __init__(self, prefactor: Fraction):
        self.rational = prefactor
        self.sqrt_pi = 0
        self.floats = ScaledFloat()
        self.has_float = False
        self.numeric_zero = False

    def power(self, base: Fraction, exponent: Fraction) -> TermValue | None:
        """Multiply by ``base ** exponent``; returns a verdict for 0 bases."""
        if base < 0:
            raise NumericError(f"negative base {base} for a power")
        if base == 0:
            if exponent > 0:
                self.numeric_zero = True
                return None
            if exponent == 0:
                return None
            return DIVERGENT
        if exponent.denominator == 1 and abs(exponent) <= EXACT_POWER_LIMIT:
            self.rational *= base ** int(exponent)
        else:
            self.floats.mul_pow(float(base), float(exponent))
            self.has_float = True
        return None


def regularized_term_value(
    term: GammaProduct,
    point: Mapping[IndexVar, int],
    bindings: Mapping[str, Fraction],
    legacy: bool = False,
) -> TermValue:
    """Evaluate ``term`` at a lattice point as the shared-``eps`` limit.

    For every gamma factor ``Gamma(L)**s`` with ``L`` at the point equal to a
    non-positive integer ``-p``, the factor behaves like
    ``((-1)^p / (p! * alpha * eps))**s`` where ``alpha`` is the sum of the
    index coefficients of ``L``. Pole orders are balanced: an excess in the
    numerator is divergent, in the denominator the term is zero.

    ``legacy=True`` takes every pole slope as 1, which reproduces the
    classical rule continued in the base only.
    """
    acc = _Acc(term.prefactor)
    balance = 0
    free = set(point)

    for arg, sigma in term.gamma_factors:
        v = arg.evaluate(point, bindings)
        if v.denominator == 1 and v <= 0:
            p = int(-v)
            alpha = sum((c for var, c in arg.index_coeffs if var in free), Fraction(0))
            if alpha == 0:
                return ZERO if sigma < 0 else DIVERGENT
            if legacy:
                alpha = Fraction(1)
            acc.rational *= (Fraction((-1) ** p, factorial(p)) / alpha) ** sigma
            balance += sigma
            continue
        exact = gamma_exact(v)
        if exact is not None:
            q, h = exact
            acc.rational *= q ** sigma
            acc.sqrt_pi += h * sigma
        elif abs(v) < 170:
            acc.floats.mul(gamma_real(float(v)) ** sigma)
            acc.has_float = True
        else:
            lg, sign = log_abs_gamma(float(v))
            acc.floats.mul_exp(sigma * lg, sign ** abs(sigma))
            acc.has_float = True

    if balance > 0:
        return DIVERGENT
    if balance < 0:
        return ZERO

    for var in term.indicators:
        if var not in point:
            raise UnboundParameter(str(var))
        n = point[var]
        acc.rational *= Fraction((-1) ** n, factorial(n))

    for name, exponent in term.param_powers:
        verdict = acc.power(_binding(bindings, name), exponent.evaluate(point, bindings))
        if verdict is not None:
            return verdict
    for base, exponent in term.numeric_consts:
        verdict = acc.power(base, exponent.evaluate(point, bindings))
        if verdict is not None:
            return verdict

    if acc.numeric_zero or acc.rational == 0:
        return TermValue(TermKind.FINITE, 0.0, Fraction(0) if not acc.has_float else None)

    out = acc.floats
    out.mul_fraction(acc.rational)
    if acc.sqrt_pi:
        out.mul_pow(SQRT_PI, acc.sqrt_pi)
    value = out.value()
    exact = None if acc.has_float else acc.rational
    return TermValue(TermKind.FINITE, value, exact, acc.sqrt_pi)
