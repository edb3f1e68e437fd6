"""Bracket elimination, classification and combination of series solutions."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .core import (
    AffineForm,
    BracketSeries,
    Classification,
    GammaProduct,
    IndexVar,
    Kind,
    SeriesSolution,
)
from .errors import (
    DidNotConverge,
    DivergentTermEncountered,
    EmptyList,
    EngineError,
    NegativeIndex,
    NoConvergentSolution,
    NoSolutions,
    NumericError,
)
from .pochhammer import regularized_term_value
from .summation import evaluate_shell, sum_series

# Shells inspected by classify(); also the Null-confirmation depth.
PROBE_TERMS = 50
PROBE_MAX_POINTS = 20000
RATIO_THRESHOLD = 0.999


def representation_index(bs: BracketSeries) -> int:
    idx = len(bs.indices) - len(bs.brackets)
    if idx < 0:
        raise NegativeIndex(
            f"{len(bs.brackets)} brackets but only {len(bs.indices)} sums"
        )
    return idx


def _without(form: AffineForm, drop) -> AffineForm:
    return AffineForm(
        tuple((v, c) for v, c in form.index_coeffs if v not in drop),
        form.const,
        form.sym_coeffs,
    )


def solve_subset(bs: BracketSeries, subset: Sequence[IndexVar]) -> SeriesSolution | None:
    """Eliminate ``subset`` by making every bracket vanish; ``None`` if singular."""
    matrix = [[br.coeff(v) for v in subset] for br in bs.brackets]
    d = linalg.det(matrix)
    if d == 0:
        return None
    inv = linalg.inverse(matrix)
    drop = set(subset)
    rest = [_without(br, drop) for br in bs.brackets]
    subs: dict[IndexVar, AffineForm] = {}
    for j, var in enumerate(subset):
        form = AffineForm()
        for i, r in enumerate(rest):
            if inv[j][i]:
                form = form + r.scale(-inv[j][i])
        subs[var] = form
    term = bs.term.substitute(subs)
    for var in subset:
        if var not in term.indicators:
            raise EngineError(f"index {var} carries no indicator; elimination rule does not apply")
        term = term.without_indicator(var).with_gamma(-subs[var], 1)
    free = tuple(v for v in bs.indices if v not in drop)
    return SeriesSolution(free, term, 1 / abs(d), tuple(subs.items()))


def enumerate_solutions(bs: BracketSeries) -> list[SeriesSolution]:
    """One solution per non-singular choice of eliminated indices."""
    representation_index(bs)
    out = []
    for subset in itertools.combinations(bs.indices, len(bs.brackets)):
        sol = solve_subset(bs, subset)
        if sol is not None:
            out.append(sol)
    if not out:
        raise NoSolutions("every coefficient submatrix is singular")
    return out


def structural_null(sol: SeriesSolution, bindings: Mapping) -> bool:
    """A reciprocal gamma whose argument is a non-positive integer on the whole lattice."""
    for arg, sigma in sol.term.gamma_factors:
        if sigma >= 0:
            continue
        try:
            c0 = arg.evaluate({v: 0 for v in sol.free_indices}, bindings)
        except Exception:
            continue
        if c0.denominator != 1 or c0 > 0:
            continue
        if all(c.denominator == 1 and c <= 0 for _, c in arg.index_coeffs):
            return True
    return False


def classify(
    sol: SeriesSolution, bindings: Mapping, legacy: bool = False, probe: int = PROBE_TERMS
) -> Classification:
    """Null, Divergent, Convergent or FiniteValue at fixed bindings.

    Decided on the first ``probe`` shells: all structurally zero is Null; a
    divergent term, or a tail ratio estimate above ``RATIO_THRESHOLD``, is
    Divergent.
    """
    if not sol.free_indices:
        # resolve names now so unbound parameters surface here
        regularized_term_value(sol.term, {}, bindings, legacy)
        return Classification(Kind.FINITE_VALUE)
    mags: list[float] = []
    all_zero = True
    points = 0
    for n in range(probe):
        try:
            sh = evaluate_shell(sol, n, bindings, legacy)
        except NumericError:
            return Classification(Kind.DIVERGENT, note=f"term overflow in shell {n}")
        if sh.divergent:
            return Classification(Kind.DIVERGENT, note=f"divergent term in shell {n}")
        all_zero = all_zero and sh.all_zero
        mags.append(sh.magnitude)
        points += sh.points
        if points > PROBE_MAX_POINTS:
            break
    if all_zero:
        how = "structural" if structural_null(sol, bindings) else "numeric"
        return Classification(Kind.NULL, note=f"{how}; first {len(mags)} terms vanish")
    ratio = tail_ratio(mags)
    if ratio > RATIO_THRESHOLD:
        return Classification(Kind.DIVERGENT, ratio, note="term ratio test")
    return Classification(Kind.CONVERGENT, ratio)


def tail_ratio(mags: Sequence[float]) -> float:
    """Geometric-mean growth factor over the trailing half of the nonzero terms."""
    nz = [(i, m) for i, m in enumerate(mags) if m > 0.0]
    if len(nz) < 2:
        return 0.0
    (i0, m0), (i1, m1) = nz[len(nz) // 2 - 1 if len(nz) > 2 else 0], nz[-1]
    if i1 == i0:
        return 0.0
    return math.exp((math.log(m1) - math.log(m0)) / (i1 - i0))


@dataclass
class SolutionOutcome:
    solution: SeriesSolution
    classification: Classification
    value: float | None = None
    terms_used: int = 0
    note: str = ""

    @property
    def contributed(self) -> bool:
        return self.value is not None


@dataclass
class Combined:
    value: float
    outcomes: list = field(default_factory=list)

    @property
    def terms_used(self) -> int:
        return sum(o.terms_used for o in self.outcomes)


def combine_detailed(
    sols: Sequence[SeriesSolution],
    bindings: Mapping,
    legacy: bool = False,
    tol: float = 1e-13,
    max_terms: int = 5000,
) -> Combined:
    outcomes = []
    for sol in sols:
        cls = sol.classification
        if cls is None or cls.kind is not Kind.FINITE_VALUE:
            cls = classify(sol, bindings, legacy)
        out = SolutionOutcome(sol, cls)
        if cls.kind in (Kind.CONVERGENT, Kind.FINITE_VALUE):
            try:
                out.value, diag = sum_series(sol, bindings, tol, max_terms, legacy)
                out.terms_used = diag.terms_used
            except (DidNotConverge, DivergentTermEncountered) as exc:
                out.note = f"discarded: {exc}"
        else:
            out.note = "discarded" if cls.kind is Kind.DIVERGENT else "contributes 0"
        outcomes.append(out)
    used = [o.value for o in outcomes if o.contributed]
    if not used:
        summary = "; ".join(f"{o.classification}" + (f" ({o.note})" if o.note else "") for o in outcomes)
        raise NoConvergentSolution(f"no convergent series solution: {summary}")
    return Combined(math.fsum(used), outcomes)


def combine(sols, bindings, legacy: bool = False, tol: float = 1e-13, max_terms: int = 5000) -> float:
    """Sum the convergent and finite solutions; Null and Divergent ones are dropped."""
    return combine_detailed(sols, bindings, legacy, tol, max_terms).value


def choose_representation(reps: Sequence[BracketSeries]) -> BracketSeries:
    """Minimal index first, then fewest sums, then generation order."""
    if not reps:
        raise EmptyList("no representations to choose from")
    best = min(
        range(len(reps)),
        key=lambda i: (representation_index(reps[i]), len(reps[i].indices), i),
    )
    return reps[best]


@dataclass(frozen=True)
class Hypergeometric:
    """``leading * pFq(numerator; denominator; z)`` in the single free index.

    ``z = z_scale * prod(param ** power) * prod(base ** power)``.
    """

    numerator: tuple
    denominator: tuple
    z_scale: Fraction
    z_params: tuple
    z_numeric: tuple
    leading: GammaProduct
    weight: Fraction

    @property
    def p(self) -> int:
        return len(self.numerator)

    @property
    def q(self) -> int:
        return len(self.denominator)

    def z_text(self) -> str:
        parts = [] if self.z_scale == 1 else [str(self.z_scale)]
        parts += [f"{n}^{e}" if e != 1 else n for n, e in self.z_params]
        parts += [f"({b})^{e}" for b, e in self.z_numeric]
        return "*".join(parts) or "1"

    def __str__(self) -> str:
        num = ", ".join(str(a) for a in self.numerator)
        den = ", ".join(str(a) for a in self.denominator)
        return f"{self.p}F{self.q}({num}; {den}; {self.z_text()})"


def _linear_factors(alpha: int, beta: AffineForm) -> tuple[Fraction, list[AffineForm], int]:
    """``Gamma(alpha(m+1)+beta) / Gamma(alpha m + beta)`` as ``scale * prod (m + c)**sign``."""
    scale = Fraction(1)
    params = []
    if alpha > 0:
        for j in range(alpha):
            scale *= alpha
            params.append((beta + j).scale(Fraction(1, alpha)))
        return scale, params, 1
    a = -alpha
    for j in range(1, a + 1):
        scale *= alpha
        params.append((beta - j).scale(Fraction(1, alpha)))
    return scale, params, -1


def to_hypergeometric(sol: SeriesSolution) -> Hypergeometric | None:
    """Recognize a one-index solution as a generalized hypergeometric series.

    The term ratio ``t(m+1)/t(m)`` is computed exactly from the gamma
    product; ``None`` when it is not a rational function of ``m``.
    """
    if len(sol.free_indices) != 1:
        return None
    (m,) = sol.free_indices
    term = sol.term
    scale = Fraction(1)
    num: list[AffineForm] = []
    den: list[AffineForm] = []
    if m in term.indicators:
        scale = -scale
        den.append(AffineForm.constant(1))
    for arg, sigma in term.gamma_factors:
        alpha = arg.coeff(m)
        if alpha == 0:
            continue
        if alpha.denominator != 1:
            return None
        beta = _without(arg, {m})
        s, params, sign = _linear_factors(int(alpha), beta)
        scale *= s ** (sign * sigma)
        target = num if sign * sigma > 0 else den
        for _ in range(abs(sigma)):
            target.extend(params)
    z_params = []
    for name, e in term.param_powers:
        c = e.coeff(m)
        if c:
            z_params.append((name, c))
    z_numeric = []
    for base, e in term.numeric_consts:
        c = e.coeff(m)
        if c.denominator == 1:
            scale *= base ** int(c)
        elif c:
            z_numeric.append((base, c))
    for a in list(num):
        if a in den:
            num.remove(a)
            den.remove(a)
    one = AffineForm.constant(1)
    if one in den:
        den.remove(one)
    else:
        num.append(one)
    leading = term.substitute({m: AffineForm()}).without_indicator(m)
    key = lambda f: f.sort_key()
    return Hypergeometric(
        tuple(sorted(num, key=key)),
        tuple(sorted(den, key=key)),
        scale,
        tuple(z_params),
        tuple(z_numeric),
        leading,
        sol.weight,
    )
