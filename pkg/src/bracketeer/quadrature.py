"""Independent numeric oracle for integrals over ``[0, inf)``.

Non-oscillatory integrands use exp-sinh (double exponential) quadrature, with
``log x`` carried alongside ``x`` so algebraic endpoint behaviour never
underflows. Oscillatory integrands are integrated over a tanh-sinh head and
then cell by cell between consecutive zeros of the fastest oscillating
factor; the partial sums are accelerated by iterated averaging.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from . import kernels
from .core import normalize_bindings
from .errors import OracleFailedToConverge, UnboundParameter
from .expr import BesselJ, Coeff, Cos, Exp, Expr, MultinomialPower, Power, Product, Sin
from .parser import integrands

GAUSS_POINTS = 24
MAX_LEVEL = 9


def _coeff_value(c: Coeff, b: Mapping[str, Fraction]) -> float:
    v = float(c.rational)
    for name, k in c.params:
        if name not in b:
            raise UnboundParameter(name)
        v *= float(b[name]) ** k
    return v


def _const(form, b) -> float:
    return float(form.evaluate({}, b))


@dataclass
class Program:
    """Numeric form of one product integrand: ``x**power * prod(rows)``."""

    power: float
    rows: np.ndarray
    terms: np.ndarray
    frequency: float  # of the fastest oscillating factor; 0 if none
    offset: float  # phase of its zeros, in units of the half period

    def __call__(self, xs, logxs=None, logw=None):
        """Integrand values, times ``exp(logw)`` when given."""
        xs = np.asarray(xs, dtype=float)
        if logxs is None:
            with np.errstate(divide="ignore"):
                logxs = np.log(xs)
        return kernels.eval_points(self.rows, self.terms, xs, logxs, self.power, logw)


def compile_integrand(product: Product, bindings) -> Program:
    b = normalize_bindings(bindings)
    power = 0.0
    rows = []
    terms = []
    freq = 0.0
    offset = 0.0
    for atom in product.atoms():
        if isinstance(atom, Power):
            power += _const(atom.exponent, b)
        elif isinstance(atom, Exp):
            rows.append([kernels.KIND_EXP, _coeff_value(atom.coeff, b), float(atom.power), 0, 0, 0])
        elif isinstance(atom, (Sin, Cos)):
            c = _coeff_value(atom.coeff, b)
            kind = kernels.KIND_SIN if isinstance(atom, Sin) else kernels.KIND_COS
            rows.append([kind, c, 1.0, 0, 0, 0])
            if c > freq:
                freq, offset = c, (0.0 if isinstance(atom, Sin) else 0.5)
        elif isinstance(atom, BesselJ):
            c = _coeff_value(atom.coeff, b)
            nu = _const(atom.order, b)
            rows.append([kernels.KIND_BESSELJ, c, 1.0, nu, 0, 0])
            if c > freq:
                freq, offset = c, (0.5 * nu - 0.25) % 1.0
        elif isinstance(atom, MultinomialPower):
            start = len(terms)
            for coeff, p in atom.terms:
                terms.append([math.log(_coeff_value(coeff, b)), float(p)])
            rows.append(
                [kernels.KIND_MULTI, 1.0, 0.0, _const(atom.exponent, b), start, len(atom.terms)]
            )
        else:
            raise TypeError(f"no numeric kernel for {type(atom).__name__}")
    return Program(
        power,
        np.asarray(rows, dtype=float).reshape(-1, 6),
        np.asarray(terms, dtype=float).reshape(-1, 2),
        freq,
        offset,
    )


def _exp_sinh_level(prog: Program, h: float, offset: bool, tmax: float) -> float:
    """Trapezoid sum of the exp-sinh transformed integrand on the grid ``h``."""
    k = np.arange(-int(tmax / h) - 1, int(tmax / h) + 2)
    t = (k + (0.5 if offset else 0.0)) * h
    logx = 0.5 * math.pi * np.sinh(t)
    keep = logx < 700.0
    t, logx = t[keep], logx[keep]
    x = np.exp(logx)
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        # dx/dt = x * (pi/2) cosh t, folded into the kernel's log weight
        vals = prog(x, logx, logx + np.log(0.5 * math.pi * np.cosh(t)))
    vals = np.where(np.isfinite(vals), vals, 0.0)
    return float(h * math.fsum(vals))


def exp_sinh(prog: Program, tol: float, tmax: float = 10.0) -> float:
    h = 0.5
    total = _exp_sinh_level(prog, h, False, tmax)
    prev = total
    for _ in range(MAX_LEVEL):
        fine = _exp_sinh_level(prog, h, True, tmax)
        estimate = 0.5 * (prev + fine)
        h *= 0.5
        if abs(estimate - prev) <= tol:
            return estimate
        prev = estimate
    raise OracleFailedToConverge(f"exp-sinh quadrature stalled at step {h}")


def _tanh_sinh_level(prog: Program, upper: float, h: float, offset: bool, tmax: float) -> float:
    k = np.arange(-int(tmax / h) - 1, int(tmax / h) + 2)
    t = (k + (0.5 if offset else 0.0)) * h
    u = 0.5 * math.pi * np.sinh(t)
    e = np.exp(-2.0 * np.abs(u))
    # x = upper / (1 + exp(-2u)); log x without underflow for u << 0
    logx = math.log(upper) - np.where(u >= 0, np.log1p(e), -2.0 * u + np.log1p(e))
    x = np.exp(logx)
    logdx = math.log(upper) + np.log(0.5 * math.pi * np.cosh(t)) + np.log(2.0 * e) - 2.0 * np.log1p(e)
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        vals = prog(x, logx, logdx)
    vals = np.where(np.isfinite(vals), vals, 0.0)
    return float(h * math.fsum(vals))


def tanh_sinh(prog: Program, upper: float, tol: float, tmax: float = 4.0) -> float:
    """Integral over ``[0, upper]``; tolerant of integrable singularities at 0."""
    h = 0.5
    prev = _tanh_sinh_level(prog, upper, h, False, tmax)
    for _ in range(MAX_LEVEL):
        fine = _tanh_sinh_level(prog, upper, h, True, tmax)
        estimate = 0.5 * (prev + fine)
        h *= 0.5
        if abs(estimate - prev) <= tol:
            return estimate
        prev = estimate
    raise OracleFailedToConverge("tanh-sinh head quadrature did not settle")


def cell_integrals(prog: Program, start: float, width: float, count: int) -> np.ndarray:
    """Gauss-Legendre integral of each cell ``[start + k w, start + (k+1) w]``."""
    nodes, weights = np.polynomial.legendre.leggauss(GAUSS_POINTS)
    left = start + width * np.arange(count)
    xs = (left[:, None] + 0.5 * width * (nodes[None, :] + 1.0)).ravel()
    vals = prog(xs).reshape(count, GAUSS_POINTS)
    return 0.5 * width * (vals @ weights)


def iterated_average(partials: np.ndarray, levels: int) -> float:
    s = np.asarray(partials, dtype=float)
    for _ in range(min(levels, len(s) - 1)):
        s = 0.5 * (s[1:] + s[:-1])
    return float(s[-1])


def oscillatory(prog: Program, tol: float, max_cells: int = 12800) -> float:
    width = math.pi / prog.frequency
    start = prog.offset * width
    if start < 0.5 * width:
        start += width
    head = tanh_sinh(prog, start, tol * 1e-2)
    count = 200
    cells = cell_integrals(prog, start, width, count)
    previous = None
    while True:
        partials = head + np.cumsum(cells)
        estimate = iterated_average(partials[count // 2:], count // 4)
        change = math.inf if previous is None else abs(estimate - previous)
        if change <= tol:
            return estimate
        if count >= max_cells:
            raise OracleFailedToConverge(
                f"oscillatory tail did not settle within {count} cells (last change {change:.3g})"
            )
        previous = estimate
        cells = np.concatenate([cells, cell_integrals(prog, start + count * width, width, count)])
        count *= 2


def integrate_product(product: Product, bindings, tol: float) -> float:
    prog = compile_integrand(product, bindings)
    if prog.frequency > 0.0:
        return oscillatory(prog, tol)
    return exp_sinh(prog, tol)


def quadrature_oracle(e: Expr, bindings, tol: float = 1e-10) -> float:
    """Numeric value of the integral of ``e`` over ``[0, inf)``.

    ``tol`` is an absolute target; 1e-6 is realistic for oscillatory
    integrands, 1e-10 for monotone ones.
    """
    total = 0.0
    for sign, product in integrands(e):
        total += sign * integrate_product(product, bindings, tol)
    return total
