"""End-to-end symbolic evaluation: parse, expand, eliminate, classify, sum."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .core import BracketSeries, SeriesSolution, normalize_bindings
from .engine import Combined, choose_representation, combine_detailed, enumerate_solutions
from .errors import BracketeerError, InputError, UnboundParameter
from .expansion import expand
from .expr import Expr, Product, names_in
from .parser import integrands, parse


@dataclass
class Plan:
    """Bindings-independent part of the pipeline for one product integrand."""

    sign: int
    integrand: Product
    representations: list
    chosen: BracketSeries
    solutions: list


@dataclass
class PartResult:
    plan: Plan
    combined: Combined
    alternatives: list = field(default_factory=list)  # (origin, value or error text)


@dataclass
class Evaluation:
    expr: Expr
    value: float
    parts: list

    @property
    def terms_used(self) -> int:
        return sum(p.combined.terms_used for p in self.parts)


def plan(e: Expr | str) -> list[Plan]:
    if isinstance(e, str):
        e = parse(e)
    out = []
    for sign, product in integrands(e):
        reps = expand(product)
        chosen = choose_representation(reps)
        out.append(Plan(sign, product, reps, chosen, enumerate_solutions(chosen)))
    return out


def check_bindings(e: Expr, bindings: Mapping) -> dict[str, Fraction]:
    """Exact-rational bindings covering every name in ``e``."""
    b = normalize_bindings(bindings)
    params, consts = names_in(e)
    for name in sorted(params | consts):
        if name not in b:
            raise UnboundParameter(name)
    for name in sorted(params):
        if b[name] < 0:
            raise InputError(f"parameter {name} must be non-negative, got {b[name]}")
    return b


def evaluate(
    e: Expr | str,
    bindings: Mapping,
    legacy: bool = False,
    tol: float = 1e-13,
    max_terms: int = 5000,
    alternatives: bool = False,
) -> Evaluation:
    """Value of the integral of ``e`` over ``[0, inf)`` by the bracket method.

    ``alternatives=True`` also evaluates every non-chosen representation and
    records its value (or failure) for diagnostics.
    """
    if isinstance(e, str):
        e = parse(e)
    b = check_bindings(e, bindings)
    parts = []
    for p in plan(e):
        combined = combine_detailed(p.solutions, b, legacy, tol, max_terms)
        part = PartResult(p, combined)
        if alternatives:
            for rep in p.representations:
                if rep is p.chosen:
                    continue
                try:
                    sols = enumerate_solutions(rep)
                    v = combine_detailed(sols, b, legacy, tol, max_terms).value
                    part.alternatives.append((rep.origin, v))
                except BracketeerError as exc:
                    part.alternatives.append((rep.origin, f"{type(exc).__name__}: {exc}"))
        parts.append(part)
    value = math.fsum(p.plan.sign * p.combined.value for p in parts)
    return Evaluation(e, value, parts)
