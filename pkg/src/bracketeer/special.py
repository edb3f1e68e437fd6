"""Real gamma and Bessel functions, plus an overflow-safe float product."""

from __future__ import annotations

import math
from fractions import Fraction

from . import kernels
from .errors import NumericError, PoleAt

SQRT_PI = math.sqrt(math.pi)
_LN2 = math.log(2.0)


def gamma_real(x: float) -> float:
    """Gamma function of a real argument.

    Lanczos approximation for ``x >= 1/2`` and the reflection formula below;
    relative error under 1e-13 on ``|x| <= 50``.
    """
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        raise PoleAt(x)
    return kernels.gamma_raw(x)


def log_abs_gamma(x: float) -> tuple[float, int]:
    """``(log|Gamma(x)|, sign)`` for arguments too large for :func:`gamma_real`."""
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        raise PoleAt(x)
    sign = 1
    if x < 0.0 and int(math.floor(-x)) % 2 == 0:
        sign = -1
    return math.lgamma(x), sign


def bessel_j(nu: float, x: float) -> float:
    return kernels.bessel_j(float(nu), float(x))


class ScaledFloat:
    """Running product kept as ``mantissa * 2**exponent``.

    Lets huge rationals and large powers meet without intermediate overflow.
    """

    __slots__ = ("m", "e")

    def __init__(self, value: float = 1.0):
        self.m, self.e = math.frexp(value)

    def _norm(self):
        m, e = math.frexp(self.m)
        self.m = m
        self.e += e

    def mul(self, x: float) -> ScaledFloat:
        m, e = math.frexp(x)
        self.m *= m
        self.e += e
        self._norm()
        return self

    def mul_fraction(self, q: Fraction) -> ScaledFloat:
        if q == 0:
            self.m, self.e = 0.0, 0
            return self
        n, d = q.numerator, q.denominator
        shift = n.bit_length() - d.bit_length()
        if shift >= 0:
            f = float(Fraction(n, d << shift))
        else:
            f = float(Fraction(n << -shift, d))
        self.m *= f
        self.e += shift
        self._norm()
        return self

    def mul_exp(self, log_abs: float, sign: int = 1) -> ScaledFloat:
        """Multiply by ``sign * exp(log_abs)``."""
        t = log_abs / _LN2
        k = math.floor(t)
        self.m *= sign * 2.0 ** (t - k)
        self.e += int(k)
        self._norm()
        return self

    def mul_pow(self, base: float, exponent: float) -> ScaledFloat:
        """Multiply by ``base ** exponent`` for ``base > 0``."""
        try:
            v = base ** exponent
        except OverflowError:
            v = math.inf
        if v != 0.0 and math.isfinite(v):
            return self.mul(v)
        return self.mul_exp(exponent * math.log(base))

    def value(self) -> float:
        try:
            return math.ldexp(self.m, self.e)
        except OverflowError as exc:
            raise NumericError("term magnitude exceeds the float range") from exc
