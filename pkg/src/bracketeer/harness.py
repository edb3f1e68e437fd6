"""Verification of engine values against the quadrature oracle."""

from __future__ import annotations

import math
from typing import Mapping

from .core import EvaluationReport
from .errors import BracketeerError, InputError
from .expr import OSCILLATORY, Expr
from .parser import parse
from .pipeline import evaluate
from .quadrature import quadrature_oracle

# Oracle targets (absolute) at desk scale.
ORACLE_TOL_OSCILLATORY = 1e-8
ORACLE_TOL_SMOOTH = 1e-12
ZERO_TARGET = 1e-12


def default_oracle_tol(e: Expr) -> float:
    if any(isinstance(a, OSCILLATORY) for a in e.atoms()):
        return ORACLE_TOL_OSCILLATORY
    return ORACLE_TOL_SMOOTH


def solution_log(evaluation) -> list[dict]:
    log = []
    for k, part in enumerate(evaluation.parts):
        for o in part.combined.outcomes:
            log.append(
                {
                    "integrand": k,
                    "free_indices": [str(v) for v in o.solution.free_indices],
                    "classification": str(o.classification),
                    "value": o.value,
                    "terms_used": o.terms_used,
                    "note": o.note or o.classification.note,
                }
            )
    return log


def verify(
    e: Expr | str,
    bindings: Mapping,
    tol: float,
    legacy: bool = False,
    oracle_tol: float | None = None,
    max_terms: int = 5000,
) -> EvaluationReport:
    """Compare the engine against the oracle.

    Passes iff the relative error is within ``tol`` (absolute error when the
    oracle value is essentially zero). Engine or oracle failures give a
    failed report with the reason; malformed input still raises.
    """
    if isinstance(e, str):
        e = parse(e)
    reasons: list[str] = []
    engine_value = None
    terms = 0
    log: list = []
    try:
        ev = evaluate(e, bindings, legacy=legacy, max_terms=max_terms)
        engine_value = ev.value
        terms = ev.terms_used
        log = solution_log(ev)
    except InputError:
        raise
    except BracketeerError as exc:
        reasons.append(f"engine: {type(exc).__name__}: {exc}")
    oracle_value = None
    try:
        oracle_value = quadrature_oracle(e, bindings, oracle_tol or default_oracle_tol(e))
    except InputError:
        raise
    except BracketeerError as exc:
        reasons.append(f"oracle: {type(exc).__name__}: {exc}")

    abs_err = rel_err = None
    verdict = "fail"
    if engine_value is not None and oracle_value is not None:
        abs_err = abs(engine_value - oracle_value)
        if abs(oracle_value) > ZERO_TARGET:
            rel_err = abs_err / abs(oracle_value)
            ok = rel_err <= tol
        else:
            ok = abs_err <= tol
        if ok:
            verdict = "pass"
        else:
            reasons.append(
                f"error {rel_err if rel_err is not None else abs_err:.3g} exceeds tolerance {tol:g}"
            )
    return EvaluationReport(
        engine_value,
        oracle_value,
        abs_err,
        rel_err,
        terms,
        log,
        verdict,
        tol,
        reasons,
    )


def is_finite(x) -> bool:
    return x is not None and math.isfinite(x)
