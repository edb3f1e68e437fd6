"""Recursive-descent parser for the integrand DSL.

Grammar::

    expr     := ['-'] term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := atom ['^' exponent]
    atom     := 'x' | 'exp' '(' poly ')' | 'sin' '(' linarg ')'
              | 'cos' '(' linarg ')' | 'besselj' '(' const ',' linarg ')'
              | '(' poly ')'
    exponent := ['-'] rational | name | '(' const ')'
    const    := signed sum of rationals, names and rational*name
    poly     := signed sum of monomials c*a^k*...*x^p

Names other than ``x`` are parameters when they appear as coefficients and
symbolic constants when they appear in exponents or Bessel orders.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .core import AffineForm
from .errors import DSLSyntaxError, MultipleVariables, UnsupportedAtom, UnsupportedStructure
from .expr import (
    ATOM_TYPES,
    BesselJ,
    Coeff,
    Cos,
    Exp,
    Expr,
    MultinomialPower,
    Power,
    Product,
    Sin,
    Sum,
)

FUNCTIONS = ("exp", "sin", "cos", "besselj")

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*|\.\d+|\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),]))"
)


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int

    def as_tuple(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass
class Token:
    kind: str  # 'num', 'name', 'op', 'end'
    text: str
    start: int
    end: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            start = pos
            while start < n and text[start].isspace():
                start += 1
            raise DSLSyntaxError(f"unexpected character {text[start]!r}", (start, start + 1))
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind), m.end(kind)))
        pos = m.end()
    tokens.append(Token("end", "", n, n))
    return tokens


@dataclass
class _Mono:
    coeff: Coeff
    xpow: Fraction
    has_x: bool
    span: tuple[int, int]
    first_name: tuple[str, tuple[int, int]] | None


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    # -- token helpers -------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            t = self.tok
            found = "end of input" if t.kind == "end" else repr(t.text)
            raise DSLSyntaxError(f"expected {text!r}, found {found}", (t.start, max(t.end, t.start)))
        return self.advance()

    def error(self, message: str, tok: Token | None = None) -> DSLSyntaxError:
        t = tok or self.tok
        return DSLSyntaxError(message, (t.start, t.end))

    # -- literals ------------------------------------------------------------

    def number(self) -> Fraction:
        t = self.tok
        if t.kind != "num":
            raise self.error("expected a number")
        self.advance()
        value = Fraction(t.text)
        if self.at("/") and self.tokens[self.i + 1].kind == "num":
            self.advance()
            d = Fraction(self.advance().text)
            if d == 0:
                raise self.error("division by zero", self.tokens[self.i - 1])
            value /= d
        return value

    def signed_number(self) -> Fraction:
        sign = 1
        while self.at("-") or self.at("+"):
            if self.advance().text == "-":
                sign = -sign
        return sign * self.number()

    def const_affine(self) -> AffineForm:
        """Signed sum of rationals, names and ``rational*name`` terms."""
        form = AffineForm()
        sign = 1
        if self.at("-") or self.at("+"):
            sign = -1 if self.advance().text == "-" else 1
        while True:
            form = form + self.const_term().scale(sign)
            if self.at("+") or self.at("-"):
                sign = -1 if self.advance().text == "-" else 1
            else:
                return form

    def const_term(self) -> AffineForm:
        t = self.tok
        if t.kind == "num":
            value = self.number()
            if self.at("*"):
                self.advance()
                return self.const_name().scale(value)
            return AffineForm.constant(value)
        return self.const_name()

    def const_name(self) -> AffineForm:
        t = self.tok
        if t.kind != "name":
            raise self.error("expected a constant")
        if t.text == "x":
            raise UnsupportedStructure(
                f"the integration variable cannot appear in an exponent or order at {t.start}..{t.end}"
            )
        self.advance()
        return AffineForm.symbol(t.text)

    # -- grammar -------------------------------------------------------------

    def expr(self) -> Expr:
        start = self.tok.start
        sign = 1
        if self.at("-"):
            self.advance()
            sign = -1
        terms = [self.term()]
        signs = [sign]
        while self.at("+") or self.at("-"):
            signs.append(-1 if self.advance().text == "-" else 1)
            terms.append(self.term())
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        if len(terms) == 1 and signs[0] == 1:
            return terms[0]
        return Sum(tuple(terms), tuple(signs), span=(start, self.tok.start))

    def term(self) -> Expr:
        start = self.tok.start
        factors = [self.factor()]
        while self.at("*"):
            self.advance()
            factors.append(self.factor())
        if len(factors) == 1:
            return factors[0]
        return Product(tuple(factors), span=(start, self.tokens[self.i - 1].end))

    def factor(self) -> Expr:
        atom = self.atom()
        if self.at("^"):
            caret = self.advance()
            exponent = self.exponent()
            atom = self.apply_power(atom, exponent, caret)
        return atom

    def exponent(self) -> AffineForm:
        if self.at("("):
            self.advance()
            form = self.const_affine()
            self.expect(")")
            return form
        if self.tok.kind == "name":
            return self.const_name()
        return AffineForm.constant(self.signed_number())

    def apply_power(self, atom: Expr, exponent: AffineForm, caret: Token) -> Expr:
        span = (atom.span[0] if atom.span else caret.start, self.tokens[self.i - 1].end)
        if isinstance(atom, Power):
            base = atom.exponent
            if base.is_constant:
                return Power(exponent.scale(base.const), span=span)
            if exponent.is_constant:
                return Power(base.scale(exponent.const), span=span)
            raise UnsupportedStructure(f"product of symbolic exponents at {span[0]}..{span[1]}")
        if isinstance(atom, MultinomialPower) and atom.exponent == AffineForm.constant(1):
            return MultinomialPower(atom.terms, exponent, span=span)
        raise UnsupportedStructure(
            f"cannot raise {type(atom).__name__.lower()} to a power at {span[0]}..{span[1]}"
        )

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "name":
            if t.text == "x":
                self.advance()
                return Power(AffineForm.constant(1), span=(t.start, t.end))
            if self.tokens[self.i + 1].kind == "op" and self.tokens[self.i + 1].text == "(":
                if t.text not in FUNCTIONS:
                    raise UnsupportedAtom(t.text, (t.start, t.end))
                return self.call()
            raise MultipleVariables(t.text, (t.start, t.end))
        if self.at("("):
            self.advance()
            monos = self.poly()
            close = self.expect(")")
            span = (t.start, close.end)
            if len(monos) == 1 and monos[0].coeff.is_one and monos[0].has_x:
                return Power(AffineForm.constant(monos[0].xpow), span=span)
            terms = tuple((m.coeff, m.xpow) for m in monos)
            return MultinomialPower(terms, AffineForm.constant(1), span=span)
        if t.kind == "num":
            raise self.error("bare numeric factors are not part of the grammar")
        if t.kind == "end":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {t.text!r}")

    def call(self) -> Expr:
        name = self.advance()
        self.expect("(")
        if name.text == "besselj":
            order = self.const_affine()
            self.expect(",")
            coeff = self.linarg(name)
            close = self.expect(")")
            return BesselJ(order, coeff, span=(name.start, close.end))
        if name.text in ("sin", "cos"):
            coeff = self.linarg(name)
            close = self.expect(")")
            cls = Sin if name.text == "sin" else Cos
            return cls(coeff, span=(name.start, close.end))
        # exp
        monos = self.poly()
        close = self.expect(")")
        span = (name.start, close.end)
        if len(monos) != 1:
            raise UnsupportedStructure(f"exp of a sum is not supported at {span[0]}..{span[1]}")
        m = monos[0]
        if not m.has_x:
            self._no_variable(m, span)
        return Exp(-m.coeff, m.xpow, span=span)

    def linarg(self, fn: Token) -> Coeff:
        start = self.tok.start
        monos = self.poly()
        span = (start, self.tokens[self.i - 1].end)
        if len(monos) != 1:
            raise UnsupportedStructure(
                f"{fn.text} needs a single monomial c*x as argument at {span[0]}..{span[1]}"
            )
        m = monos[0]
        if not m.has_x:
            self._no_variable(m, span)
        if m.xpow != 1:
            raise UnsupportedStructure(
                f"{fn.text} argument must be linear in x at {span[0]}..{span[1]}"
            )
        return m.coeff

    def _no_variable(self, m: _Mono, span):
        if m.first_name is not None:
            raise MultipleVariables(m.first_name[0], m.first_name[1])
        raise UnsupportedStructure(f"argument does not depend on x at {span[0]}..{span[1]}")

    def poly(self) -> list[_Mono]:
        monos = []
        sign = 1
        if self.at("-") or self.at("+"):
            sign = -1 if self.advance().text == "-" else 1
        while True:
            m = self.mono()
            if sign < 0:
                m.coeff = -m.coeff
            monos.append(m)
            if self.at("+") or self.at("-"):
                sign = -1 if self.advance().text == "-" else 1
            else:
                return monos

    def mono(self) -> _Mono:
        start = self.tok.start
        coeff = Coeff()
        xpow = Fraction(0)
        has_x = False
        first_name = None
        while True:
            t = self.tok
            if t.kind == "num":
                coeff = coeff * Coeff(self.number())
            elif t.kind == "name":
                self.advance()
                if t.text in FUNCTIONS or (self.at("(")):
                    raise UnsupportedStructure(
                        f"function call inside a polynomial at {t.start}..{t.end}"
                    )
                power = Fraction(1)
                if self.at("^"):
                    self.advance()
                    if self.at("("):
                        self.advance()
                        power = self.signed_number()
                        self.expect(")")
                    else:
                        power = self.signed_number()
                if t.text == "x":
                    has_x = True
                    xpow += power
                else:
                    if power.denominator != 1:
                        raise UnsupportedStructure(
                            f"parameter powers must be integers at {t.start}..{t.end}"
                        )
                    if first_name is None:
                        first_name = (t.text, (t.start, t.end))
                    coeff = coeff * Coeff(1, ((t.text, int(power)),))
            else:
                raise self.error("expected a number, parameter or x")
            if self.at("*"):
                self.advance()
            else:
                break
        return _Mono(coeff, xpow, has_x, (start, self.tokens[self.i - 1].end), first_name)


def _byte_span(text: str, span: tuple[int, int]) -> tuple[int, int]:
    return (len(text[: span[0]].encode()), len(text[: span[1]].encode()))


def parse(text: str) -> Expr:
    """Parse DSL text into an :class:`Expr` tree.

    Error spans are byte offsets into ``text.encode()``.
    """
    try:
        return _Parser(text).expr()
    except (DSLSyntaxError, UnsupportedAtom, MultipleVariables) as exc:
        if exc.span is not None and not text.isascii():
            exc.span = _byte_span(text, exc.span)
        raise


def _check_atom(a: Expr) -> None:
    if not isinstance(a, ATOM_TYPES):
        raise UnsupportedAtom(type(a).__name__, getattr(a, "span", None))
    where = f" at {a.span[0]}..{a.span[1]}" if a.span else ""
    if isinstance(a, Exp) and a.coeff.rational <= 0:
        raise UnsupportedStructure(f"exp must decay: coefficient of x^p must be negative{where}")
    if isinstance(a, (Sin, Cos, BesselJ)) and a.coeff.rational <= 0:
        raise UnsupportedStructure(f"argument coefficient must be positive{where}")
    if isinstance(a, MultinomialPower):
        if len(a.terms) < 2:
            raise UnsupportedStructure(f"power of a single monomial is not supported{where}")
        for c, _ in a.terms:
            if c.rational <= 0:
                raise UnsupportedStructure(f"multinomial terms need positive coefficients{where}")


def validate(e: Expr) -> Expr:
    """Check catalog membership and normalize to a Sum of Products.

    A single product comes back as a :class:`Product`; a top-level sum as a
    :class:`Sum` whose terms are all products.
    """
    if isinstance(e, Sum):
        terms = []
        for t in e.terms:
            if isinstance(t, Sum):
                raise UnsupportedStructure("nested sums are not supported")
            terms.append(_normalize_product(t))
        return Sum(tuple(terms), tuple(e.signs), span=e.span)
    return _normalize_product(e)


def _normalize_product(e: Expr) -> Product:
    atoms: list[Expr] = []
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Product):
            stack.extend(reversed(node.factors))
        elif isinstance(node, Sum):
            raise UnsupportedStructure("sums are only allowed at the top level")
        else:
            _check_atom(node)
            atoms.append(node)
    return Product(tuple(atoms), span=e.span)


def integrands(e: Expr) -> list[tuple[int, Product]]:
    """Split a validated expression into signed product-form integrands."""
    v = validate(e)
    if isinstance(v, Sum):
        return list(zip(v.signs, v.terms))
    return [(1, v)]
