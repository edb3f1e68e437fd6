from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bracketeer.core import AffineForm
from bracketeer.errors import (
    BracketeerError,
    DSLSyntaxError,
    MultipleVariables,
    UnsupportedAtom,
    UnsupportedStructure,
)
from bracketeer.expr import BesselJ, Coeff, Exp, MultinomialPower, Power, Product, Sin, names_in
from bracketeer.parser import integrands, parse, validate


def test_bessel_times_sin():
    e = parse("besselj(0, a*x) * sin(b*x)")
    assert e == Product((BesselJ(AffineForm(), Coeff(1, (("a", 1),))), Sin(Coeff(1, (("b", 1),)))))


def test_exp():
    assert parse("exp(-x)") == Exp(Coeff(1, ()), Fraction(1))


def test_beta_integrand():
    e = parse("x^(s-1) * (1+x)^(-al)")
    power, multi = e.factors
    assert power == Power(AffineForm.symbol("s") - 1)
    assert isinstance(multi, MultinomialPower)
    assert multi.terms == ((Coeff(1, ()), 0), (Coeff(1, ()), 1))
    assert multi.exponent == -AffineForm.symbol("al")
    assert names_in(e) == (set(), {"s", "al"})


def test_rational_exponents():
    assert parse("x^3/2") == Power(AffineForm.constant(Fraction(3, 2)))
    assert parse("x^-1/2") == Power(AffineForm.constant(Fraction(-1, 2)))


def test_sum_splits_into_integrands():
    parts = integrands(parse("sin(b*x) + x*cos(b*x)"))
    assert [s for s, _ in parts] == [1, 1]
    assert all(isinstance(p, Product) for _, p in parts)


def test_no_merging_of_like_atoms():
    (_, p), = integrands(parse("exp(-x)*exp(-x)"))
    assert len(p.factors) == 2


@pytest.mark.parametrize(
    "text, exc",
    [
        ("tan(x)", UnsupportedAtom),
        ("exp(-x)*log(x)", UnsupportedAtom),
        ("sin(q*x", DSLSyntaxError),
        ("sin(b*y)", MultipleVariables),
        ("exp(-y)", MultipleVariables),
        ("2", DSLSyntaxError),
        ("x ^", DSLSyntaxError),
        ("sin(x) sin(x)", DSLSyntaxError),
        ("x$", DSLSyntaxError),
    ],
)
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        validate(parse(text))


@pytest.mark.parametrize(
    "text", ["exp(x)", "cos(2)", "sin(-x)", "(1-x)^(-1/2)", "x^x", "sin(x)^2", "(x)^(1/2)*(2*x)^2"]
)
def test_structure_errors(text):
    with pytest.raises(UnsupportedStructure):
        validate(parse(text))


def test_syntax_error_span():
    with pytest.raises(DSLSyntaxError) as info:
        parse("sin(q*x")
    assert info.value.span == (7, 7)


def test_unsupported_atom_span():
    with pytest.raises(UnsupportedAtom) as info:
        parse("exp(-x) * tan(x)")
    assert info.value.span == (10, 13)


def test_spans_are_bytes():
    with pytest.raises(BracketeerError) as info:
        parse("exp(-x) * é(x)")
    start, end = info.value.span
    assert 0 <= start <= end <= len("exp(-x) * é(x)".encode())


@settings(max_examples=300)
@given(st.text(alphabet="xabs()+-*^/0123 ,.eipnocjlté", max_size=30))
def test_error_spans_within_input(text):
    try:
        parse(text)
    except (DSLSyntaxError, UnsupportedAtom, MultipleVariables) as exc:
        if exc.span is not None:
            start, end = exc.span
            assert 0 <= start <= end <= len(text.encode())
    except UnsupportedStructure:
        pass


# -- grammar-driven round trip ----------------------------------------------

names = st.sampled_from(["a", "b", "c2", "q"])
consts = st.sampled_from(["s", "al", "nu"])
rationals = st.fractions(min_value=Fraction(1, 4), max_value=9, max_denominator=4)


def num(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@st.composite
def coeff(draw, with_x=True):
    parts = []
    c = draw(rationals)
    if c != 1 or draw(st.booleans()):
        parts.append(num(c))
    for n in draw(st.lists(names, max_size=2, unique=True)):
        k = draw(st.integers(1, 3))
        parts.append(n if k == 1 else f"{n}^{k}")
    if with_x:
        parts.append("x")
    return "*".join(parts)


@st.composite
def const_expr(draw):
    pieces = [draw(consts)] if draw(st.booleans()) else []
    if not pieces or draw(st.booleans()):
        pieces.append(num(draw(rationals)))
    sign = draw(st.sampled_from(["", "-"]))
    return sign + "+".join(pieces)


@st.composite
def atom(draw):
    kind = draw(st.sampled_from(["x", "pow", "exp", "sin", "cos", "bessel", "multi"]))
    if kind == "x":
        return "x"
    if kind == "pow":
        return f"x^({draw(const_expr())})"
    if kind == "exp":
        p = draw(st.integers(1, 3))
        mono = draw(coeff()) + ("" if p == 1 else f"^{p}")
        return f"exp(-{mono})"
    if kind in ("sin", "cos"):
        return f"{kind}({draw(coeff())})"
    if kind == "bessel":
        return f"besselj({draw(const_expr())}, {draw(coeff())})"
    terms = [draw(coeff(with_x=False)) or "1"]
    for _ in range(draw(st.integers(1, 2))):
        p = draw(st.integers(1, 3))
        terms.append(draw(coeff()) + ("" if p == 1 else f"^{p}"))
    return f"({' + '.join(terms)})^({draw(const_expr())})"


@st.composite
def dsl(draw):
    terms = [" * ".join(draw(st.lists(atom(), min_size=1, max_size=3))) for _ in range(draw(st.integers(1, 3)))]
    out = terms[0]
    for t in terms[1:]:
        out += draw(st.sampled_from([" + ", " - "])) + t
    return out


@settings(max_examples=400)
@given(dsl())
def test_round_trip(text):
    e = parse(text)
    assert parse(str(e)) == e
    validate(e)
