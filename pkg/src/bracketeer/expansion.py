"""Power-series production: integrand atoms to bracket series.

Each catalog atom becomes an indexed series ``sum term(n) x**e(n)``; the
product of an integrand's atoms becomes a single multi-index series, and the
integral over ``[0, inf)`` turns ``x**e`` into the bracket ``<e + 1>``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .core import AffineForm, BracketSeries, GammaProduct, IndexedSeries, IndexVar
from .errors import FewerThanTwoTerms, IndexCollision, UnsupportedAtom
from .expr import BesselJ, Coeff, Cos, Exp, Expr, MultinomialPower, Power, Product, Sin

ONE = GammaProduct()


class IndexPool:
    """Sequential fresh indices ``n1, n2, ...``."""

    def __init__(self, start: int = 1):
        self._ids = itertools.count(start)

    def fresh(self) -> IndexVar:
        i = next(self._ids)
        return IndexVar(i, f"n{i}")


def coeff_power(c: Coeff, exponent: AffineForm) -> GammaProduct:
    """``c ** exponent`` as parameter and numeric-constant powers."""
    return GammaProduct(
        param_powers=tuple((name, exponent.scale(k)) for name, k in c.params),
        numeric_consts=((c.rational, exponent),) if c.rational != 1 else (),
    )


def constant_series() -> IndexedSeries:
    return IndexedSeries((), ONE, AffineForm())


def expand_atom(atom: Expr, pool: IndexPool | None = None, variant: int = 0) -> IndexedSeries:
    """Canonical indexed power series of one catalog atom.

    ``variant`` selects among the registered expansions of an atom; only
    two-term multinomial powers have more than one (see
    :func:`atom_variants`).
    """
    pool = pool or IndexPool()
    if isinstance(atom, Power):
        return IndexedSeries((), ONE, atom.exponent)
    if isinstance(atom, MultinomialPower):
        if variant == 0:
            return expand_multinomial(atom.terms, atom.exponent, pool)
        return expand_binomial(atom.terms, atom.exponent, pool, lead=variant - 1)
    n = pool.fresh()
    N = AffineForm.index(n)
    if isinstance(atom, Exp):
        # exp(-c x^p) = sum phi_n c^n x^(p n)
        term = GammaProduct(indicators=(n,)) * coeff_power(atom.coeff, N)
        return IndexedSeries((n,), term, N.scale(atom.power))
    if isinstance(atom, Sin):
        odd = N.scale(2) + 1
        term = (
            GammaProduct(indicators=(n,), gamma_factors=((N + 1, 1), (N.scale(2) + 2, -1)))
            * coeff_power(atom.coeff, odd)
        )
        return IndexedSeries((n,), term, odd)
    if isinstance(atom, Cos):
        even = N.scale(2)
        term = (
            GammaProduct(indicators=(n,), gamma_factors=((N + 1, 1), (even + 1, -1)))
            * coeff_power(atom.coeff, even)
        )
        return IndexedSeries((n,), term, even)
    if isinstance(atom, BesselJ):
        # J_nu(c x) = sum phi_m (c x)^(2m+nu) / (Gamma(m+nu+1) 2^(2m+nu))
        e = N.scale(2) + atom.order
        term = (
            GammaProduct(
                indicators=(n,),
                gamma_factors=((N + atom.order + 1, -1),),
                numeric_consts=((Fraction(2), -e),),
            )
            * coeff_power(atom.coeff, e)
        )
        return IndexedSeries((n,), term, e)
    raise UnsupportedAtom(type(atom).__name__, getattr(atom, "span", None))


def expand_multinomial(terms, alpha, pool: IndexPool | None = None) -> IndexedSeries:
    """``(sum c_i x**p_i) ** alpha`` as an r-fold series with one pending bracket.

    ``sum phi_{n_1..n_r} prod c_i**n_i <-alpha + n_1 + ... + n_r> / Gamma(-alpha)``
    """
    if len(terms) < 2:
        raise FewerThanTwoTerms(f"multinomial expansion needs at least two terms, got {len(terms)}")
    pool = pool or IndexPool()
    if not isinstance(alpha, AffineForm):
        alpha = AffineForm.constant(alpha)
    idx = [pool.fresh() for _ in terms]
    term = GammaProduct(indicators=tuple(idx), gamma_factors=((-alpha, -1),))
    x_exp = AffineForm()
    total = -alpha
    for n, (c, p) in zip(idx, terms):
        N = AffineForm.index(n)
        term = term * coeff_power(c, N)
        x_exp = x_exp + N.scale(p)
        total = total + N
    return IndexedSeries(tuple(idx), term, x_exp, pending_brackets=(total,))


def expand_binomial(terms, alpha, pool: IndexPool | None = None, lead: int = 0) -> IndexedSeries:
    """Binomial series of a two-term power, factoring out term ``lead``.

    ``(u + v)**alpha = u**alpha * sum phi_n Gamma(n - alpha)/Gamma(-alpha) (v/u)**n``
    """
    if len(terms) != 2:
        raise FewerThanTwoTerms("binomial expansion needs exactly two terms")
    pool = pool or IndexPool()
    if not isinstance(alpha, AffineForm):
        alpha = AffineForm.constant(alpha)
    (cu, pu), (cv, pv) = (terms[0], terms[1]) if lead == 0 else (terms[1], terms[0])
    n = pool.fresh()
    N = AffineForm.index(n)
    term = (
        GammaProduct(indicators=(n,), gamma_factors=((N - alpha, 1), (-alpha, -1)))
        * coeff_power(cu, alpha - N)
        * coeff_power(cv, N)
    )
    x_exp = alpha.scale(pu) + N.scale(pv - pu)
    return IndexedSeries((n,), term, x_exp)


def atom_variants(atom: Expr) -> list[str]:
    """Names of the registered expansions of ``atom``, in generation order."""
    if isinstance(atom, MultinomialPower):
        names = ["P2"]
        if len(atom.terms) == 2:
            names += ["binomial[0]", "binomial[1]"]
        return names
    return ["P1"]


def multiply_series(s1: IndexedSeries, s2: IndexedSeries) -> IndexedSeries:
    clash = {v.id for v in s1.indices} & {v.id for v in s2.indices}
    if clash:
        raise IndexCollision(f"index ids {sorted(clash)} occur in both factors")
    return IndexedSeries(
        s1.indices + s2.indices,
        s1.term * s2.term,
        s1.x_exponent + s2.x_exponent,
        s1.pending_brackets + s2.pending_brackets,
    )


def to_bracket_series(s: IndexedSeries, origin: str = "") -> BracketSeries:
    """Integrate over ``[0, inf)``: ``x**e`` becomes the bracket ``<e + 1>``."""
    return BracketSeries(s.indices, s.term, s.pending_brackets + (s.x_exponent + 1,), origin)


def expand(integrand: Expr) -> list[BracketSeries]:
    """Every bracket-series representation of a product-form integrand.

    One representation per combination of atom variants, in generation
    order (all-canonical first).
    """
    atoms = integrand.atoms() if isinstance(integrand, Product) else [integrand]
    variant_lists = [list(enumerate(atom_variants(a))) for a in atoms]
    reps = []
    for choice in itertools.product(*variant_lists):
        pool = IndexPool()
        series = constant_series()
        for atom, (variant, _) in zip(atoms, choice):
            series = multiply_series(series, expand_atom(atom, pool, variant))
        labels = [name for _, name in choice if name != "P1"]
        origin = "+".join(labels + ["P1"]) if labels else "P1"
        reps.append(to_bracket_series(series, origin))
    return reps
