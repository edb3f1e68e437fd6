import math
from fractions import Fraction
from itertools import product as cartesian

import numpy as np
import pytest
from scipy import special

from bracketeer.core import AffineForm, GammaProduct
from bracketeer.errors import FewerThanTwoTerms, IndexCollision
from bracketeer.expansion import (
    IndexPool,
    atom_variants,
    constant_series,
    expand,
    expand_atom,
    expand_binomial,
    expand_multinomial,
    multiply_series,
    to_bracket_series,
)
from bracketeer.expr import Coeff
from bracketeer.parser import integrands, parse
from bracketeer.pochhammer import regularized_term_value

B = {"a": Fraction(3, 2), "b": Fraction(2), "nu": Fraction(1, 3), "al": Fraction(5, 4)}


def atom_of(text):
    (_, p), = integrands(parse(text))
    return p.factors[0]


def partial_sum(series, x, bindings, depth=40):
    """Sum of term * x**exponent over the lattice box ``n_i <= depth``."""
    total = []
    for combo in cartesian(range(depth + 1), repeat=len(series.indices)):
        point = dict(zip(series.indices, combo))
        tv = regularized_term_value(series.term, point, bindings)
        e = float(series.x_exponent.evaluate(point, bindings))
        total.append(tv.value * x ** e)
    return math.fsum(total)


def test_sin_series():
    s = expand_atom(atom_of("sin(b*x)"))
    (n,) = s.indices
    N = AffineForm.index(n)
    assert s.x_exponent == N.scale(2) + 1
    assert s.term == GammaProduct(
        param_powers=(("b", N.scale(2) + 1),),
        gamma_factors=((N + 1, 1), (N.scale(2) + 2, -1)),
        indicators=(n,),
    )


def test_bessel_series():
    s = expand_atom(atom_of("besselj(0, a*x)"))
    (m,) = s.indices
    M = AffineForm.index(m)
    assert s.x_exponent == M.scale(2)
    assert s.term == GammaProduct(
        param_powers=(("a", M.scale(2)),),
        gamma_factors=((M + 1, -1),),
        indicators=(m,),
        numeric_consts=((2, -M.scale(2)),),
    )


def test_exp_series():
    s = expand_atom(atom_of("exp(-x)"))
    (n,) = s.indices
    assert s.term == GammaProduct(indicators=(n,))
    assert s.x_exponent == AffineForm.index(n)


@pytest.mark.parametrize(
    "text, f",
    [
        ("exp(-x)", lambda x: math.exp(-x)),
        ("exp(-a*x^2)", lambda x: math.exp(-1.5 * x * x)),
        ("sin(b*x)", lambda x: math.sin(2 * x)),
        ("cos(b*x)", lambda x: math.cos(2 * x)),
        ("besselj(0, a*x)", lambda x: special.jv(0, 1.5 * x)),
        ("besselj(nu, x)", lambda x: special.jv(1 / 3, x)),
        ("besselj(2, 3*x)", lambda x: special.jv(2, 3 * x)),
        ("x^(5/2)", lambda x: x ** 2.5),
    ],
)
@pytest.mark.parametrize("x", [0.1, 1.0])
def test_atom_series_fidelity(text, f, x):
    s = expand_atom(atom_of(text))
    assert abs(partial_sum(s, x, B) - f(x)) < 1e-10


def test_binomial_series_fidelity():
    s = expand_binomial(atom_of("(1 + x)^(-al)").terms, -AffineForm.symbol("al"), lead=0)
    assert abs(partial_sum(s, 0.1, B) - 1.1 ** -1.25) < 1e-10


def test_multiply_fidelity():
    pool = IndexPool()
    s = multiply_series(expand_atom(atom_of("besselj(0, a*x)"), pool), expand_atom(atom_of("sin(b*x)"), pool))
    m, n = s.indices
    assert s.x_exponent == AffineForm({m: 2, n: 2}, 1)
    assert set(s.term.indicators) == {m, n}
    x = 0.5
    assert abs(partial_sum(s, x, B, 30) - special.jv(0, 1.5 * x) * math.sin(2 * x)) < 1e-8


def test_multiply_identity_and_power():
    s = expand_atom(atom_of("exp(-x)"))
    assert multiply_series(s, constant_series()) == s
    t = multiply_series(expand_atom(atom_of("x^2")), s)
    assert t.x_exponent == AffineForm.index(s.indices[0]) + 2


def test_multiply_collision():
    s = expand_atom(atom_of("exp(-x)"))
    with pytest.raises(IndexCollision):
        multiply_series(s, s)


def test_multinomial_shape():
    s = expand_multinomial(atom_of("(1 + x)^(-al)").terms, -AffineForm.symbol("al"))
    n1, n2 = s.indices
    assert s.pending_brackets == (AffineForm({n1: 1, n2: 1}, 0, {"al": 1}),)
    assert s.term == GammaProduct(gamma_factors=((AffineForm.symbol("al"), -1),), indicators=(n1, n2))
    assert s.x_exponent == AffineForm.index(n2)


def test_multinomial_parameters():
    s = expand_multinomial(atom_of("(p + q*x)^(-al)").terms, -AffineForm.symbol("al"))
    n1, n2 = s.indices
    assert dict(s.term.param_powers) == {"p": AffineForm.index(n1), "q": AffineForm.index(n2)}


def test_three_term_multinomial():
    s = expand_multinomial(atom_of("(a + b*x + x^2)^(al)").terms, AffineForm.symbol("al"))
    assert len(s.indices) == 3 and len(s.pending_brackets) == 1
    bs = to_bracket_series(s)
    assert len(bs.brackets) == 2


def test_fewer_than_two_terms():
    with pytest.raises(FewerThanTwoTerms):
        expand_multinomial(((Coeff(1, ()), Fraction(1)),), Fraction(-1))


def test_bracket_for_entry():
    pool = IndexPool()
    s = multiply_series(expand_atom(atom_of("besselj(0, a*x)"), pool), expand_atom(atom_of("sin(b*x)"), pool))
    bs = to_bracket_series(s)
    m, n = s.indices
    assert bs.brackets == (AffineForm({m: 2, n: 2}, 2),)


@pytest.mark.parametrize("text, bracket", [("exp(-x)", {1: 1}), ("exp(-x^2)", {1: 2})])
def test_exp_brackets(text, bracket):
    (bs,) = expand(integrands(parse(text))[0][1])
    (n,) = bs.indices
    assert bs.brackets == (AffineForm({n: bracket[1]}, 1),)


def test_expand_registers_variants():
    reps = expand(integrands(parse("x^(s-1)*(1+x)^(-al)"))[0][1])
    assert [r.origin for r in reps] == ["P2+P1", "binomial[0]+P1", "binomial[1]+P1"]
    assert atom_variants(atom_of("(1+x)^(-al)")) == ["P2", "binomial[0]", "binomial[1]"]
    assert atom_variants(atom_of("sin(x)")) == ["P1"]


def test_sequential_indices():
    (bs,) = expand(integrands(parse("besselj(0,a*x)*sin(b*x)"))[0][1])
    assert [str(v) for v in bs.indices] == ["n1", "n2"]
