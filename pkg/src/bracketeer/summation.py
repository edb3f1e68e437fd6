"""Deterministic summation of series solutions over the free-index lattice.

Points are visited shell by shell (``n_1 + ... + n_d = N`` for increasing
``N``, lexicographic inside a shell); a "term" in the stopping rule is the
sum over one shell, so the one-index case is the ordinary term sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Mapping

from .core import SeriesSolution
from .errors import DidNotConverge, DivergentTermEncountered, NumericError
from .pochhammer import TermKind, regularized_term_value

CONSECUTIVE_SMALL = 5


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Tuples of ``parts`` non-negative ints summing to ``total``, lexicographic."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def shell_points(free, n: int) -> Iterator[dict]:
    for comp in compositions(n, len(free)):
        yield dict(zip(free, comp))


@dataclass
class Shell:
    total: float
    magnitude: float
    all_zero: bool
    divergent: bool
    points: int


def evaluate_shell(sol: SeriesSolution, n: int, bindings, legacy: bool = False) -> Shell:
    values = []
    mag = 0.0
    all_zero = True
    count = 0
    for point in shell_points(sol.free_indices, n):
        count += 1
        tv = regularized_term_value(sol.term, point, bindings, legacy)
        if tv.kind is TermKind.DIVERGENT:
            return Shell(math.inf, math.inf, False, True, count)
        if tv.kind is not TermKind.ZERO:
            all_zero = False
        values.append(tv.value)
        mag += abs(tv.value)
    return Shell(math.fsum(values), mag, all_zero, False, count)


@dataclass
class SumDiagnostics:
    terms_used: int
    points_evaluated: int
    last_term: float
    converged: bool

    def as_dict(self) -> dict:
        return {
            "terms_used": self.terms_used,
            "points_evaluated": self.points_evaluated,
            "last_term": self.last_term,
            "converged": self.converged,
        }


class _Neumaier:
    __slots__ = ("s", "c")

    def __init__(self):
        self.s = 0.0
        self.c = 0.0

    def add(self, x: float):
        t = self.s + x
        if abs(self.s) >= abs(x):
            self.c += (self.s - t) + x
        else:
            self.c += (x - t) + self.s
        self.s = t

    @property
    def value(self) -> float:
        return self.s + self.c


def sum_series(
    sol: SeriesSolution,
    bindings: Mapping,
    tol: float = 1e-13,
    max_terms: int = 5000,
    legacy: bool = False,
) -> tuple[float, SumDiagnostics]:
    """``weight * sum`` of the regularized terms of ``sol``.

    Stops once ``CONSECUTIVE_SMALL`` consecutive shells satisfy
    ``|shell| <= tol * |partial sum|``. The returned value is ``math.fsum`` of
    the shell sums, so it does not depend on evaluation order details.
    """
    shells: list[float] = []
    running = _Neumaier()
    small = 0
    points = 0
    last = 0.0
    max_n = 1 if not sol.free_indices else max_terms
    for n in range(max_n):
        try:
            sh = evaluate_shell(sol, n, bindings, legacy)
        except NumericError as exc:
            raise DivergentTermEncountered(f"term {n} overflowed: {exc}") from exc
        points += sh.points
        if sh.divergent:
            raise DivergentTermEncountered(f"divergent term in shell {n}")
        shells.append(sh.total)
        running.add(sh.total)
        last = sh.total
        if not math.isfinite(running.value):
            raise DivergentTermEncountered(f"partial sum overflowed at shell {n}")
        if not sol.free_indices:
            break
        if abs(sh.total) <= tol * abs(running.value):
            small += 1
            if small >= CONSECUTIVE_SMALL:
                break
        else:
            small = 0
    else:
        if sol.free_indices:
            raise DidNotConverge(max_terms)
    value = float(sol.weight) * math.fsum(shells)
    diag = SumDiagnostics(len(shells), points, last, True)
    return value, diag
