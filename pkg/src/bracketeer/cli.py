"""Command-line interface.

Exit codes: 0 success or pass, 1 verification failure, 2 input error,
3 no convergent solution, 4 numeric failure.

``BRACKETEER_TOL`` (optional) overrides the default tolerance of ``eval`` and
``verify`` when ``--tol`` is not given.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from .engine import classify, representation_index, to_hypergeometric
from .errors import (
    BracketeerError,
    DSLSyntaxError,
    InputError,
    NoConvergentSolution,
    NumericError,
)
from .harness import verify
from .parser import parse
from .pipeline import check_bindings, evaluate, plan

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_NO_CONVERGENT = 3
EXIT_NUMERIC = 4

DEFAULT_EVAL_TOL = 1e-13
DEFAULT_VERIFY_TOL = 1e-8


def _default_tol(fallback: float) -> float:
    raw = os.environ.get("BRACKETEER_TOL")
    if not raw:
        return fallback
    try:
        return float(raw)
    except ValueError:
        raise InputError(f"BRACKETEER_TOL is not a number: {raw!r}")


def _binding(text: str) -> tuple[str, Fraction]:
    name, sep, value = text.partition("=")
    if not sep or not name.strip():
        raise InputError(f"--param expects name=value, got {text!r}")
    try:
        return name.strip(), Fraction(value.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"--param {name.strip()}: not a number: {value!r}")


def _bindings(params) -> dict[str, Fraction]:
    out = {}
    for p in params or []:
        name, value = _binding(p)
        out[name] = value
    return out


def _num(x, reasons: dict, key: str):
    """JSON-safe number: finite floats pass through, anything else becomes null."""
    if x is None:
        return None
    x = float(x)
    if math.isfinite(x):
        return x
    reasons[key] = f"non-finite value {x}"
    return None


def _representations(plans) -> list[dict]:
    out = []
    for k, p in enumerate(plans):
        for r in p.representations:
            out.append(
                {
                    "integrand": k,
                    "origin": r.origin,
                    "chosen": r is p.chosen,
                    "indices": [str(v) for v in r.indices],
                    "term": str(r.term),
                    "brackets": [str(b) for b in r.brackets],
                    "index": representation_index(r),
                }
            )
    return out


def _solution_dict(k, sol, cls=None) -> dict:
    hyp = to_hypergeometric(sol)
    return {
        "integrand": k,
        "free_indices": [str(v) for v in sol.free_indices],
        "substitutions": {str(v): str(f) for v, f in sol.substitutions},
        "weight": str(sol.weight),
        "term": str(sol.term),
        "classification": str(cls) if cls is not None else None,
        "hypergeometric": str(hyp) if hyp is not None else None,
    }


def _empty(args) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "input": args.expr,
        "representations": [],
        "solutions": [],
        "value": None,
        "oracle": None,
        "abs_error": None,
        "rel_error": None,
        "verdict": None,
        "diagnostics": {},
    }


# -- subcommands -------------------------------------------------------------


def cmd_expand(args, doc, out):
    plans = plan(parse(args.expr))
    doc["representations"] = _representations(plans)
    for r in doc["representations"]:
        mark = "*" if r["chosen"] else " "
        out.append(
            f"{mark} [{r['integrand']}:{r['origin']}] index {r['index']}  "
            f"sum over {', '.join(r['indices']) or '-'}  of  {r['term']}"
        )
        for b in r["brackets"]:
            out.append(f"      <{b}>")
    return EXIT_OK


def cmd_solve(args, doc, out):
    e = parse(args.expr)
    plans = plan(e)
    bindings = check_bindings(e, _bindings(args.param)) if args.param else None
    doc["representations"] = _representations(plans)
    for k, p in enumerate(plans):
        out.append(f"integrand {k}: representation {p.chosen.origin}, index {p.chosen.index}")
        for sol in p.solutions:
            cls = sol.classification
            if bindings is not None and (cls is None or not sol.free_indices):
                cls = classify(sol, bindings, args.legacy_poch)
            d = _solution_dict(k, sol, cls)
            doc["solutions"].append(d)
            subs = ", ".join(f"{a} = {b}" for a, b in d["substitutions"].items())
            free = ", ".join(d["free_indices"]) or "-"
            out.append(f"  eliminate {subs}; free {free}; weight {d['weight']}")
            out.append(f"    term: {d['term']}")
            if d["hypergeometric"]:
                out.append(f"    series: {d['hypergeometric']}")
            if d["classification"]:
                out.append(f"    classification: {d['classification']}")
    return EXIT_OK


def cmd_eval(args, doc, out):
    e = parse(args.expr)
    tol = args.tol if args.tol is not None else _default_tol(DEFAULT_EVAL_TOL)
    ev = evaluate(
        e,
        _bindings(args.param),
        legacy=args.legacy_poch,
        tol=tol,
        max_terms=args.max_terms,
        alternatives=True,
    )
    reasons: dict = {}
    doc["representations"] = _representations([p.plan for p in ev.parts])
    alts = []
    for k, part in enumerate(ev.parts):
        for o in part.combined.outcomes:
            d = _solution_dict(k, o.solution, o.classification)
            d["value"] = _num(o.value, reasons, f"solutions[{len(doc['solutions'])}].value")
            d["terms_used"] = o.terms_used
            d["note"] = o.note
            doc["solutions"].append(d)
        for origin, v in part.alternatives:
            alts.append(
                {"integrand": k, "origin": origin, "value": v if isinstance(v, float) else None,
                 "error": None if isinstance(v, float) else v}
            )
    doc["value"] = _num(ev.value, reasons, "value")
    doc["diagnostics"] = {
        "terms_used": ev.terms_used,
        "legacy_poch": args.legacy_poch,
        "tol": tol,
        "alternative_representations": alts,
        "null_reasons": reasons,
    }
    out.append(repr(ev.value))
    if doc["value"] is None:
        raise NumericError(f"combined value is not finite: {ev.value}")
    return EXIT_OK


def cmd_verify(args, doc, out):
    e = parse(args.expr)
    tol = args.tol if args.tol is not None else _default_tol(DEFAULT_VERIFY_TOL)
    rep = verify(e, _bindings(args.param), tol, legacy=args.legacy_poch, max_terms=args.max_terms)
    reasons: dict = {}
    doc["solutions"] = rep.classification_log
    doc["value"] = _num(rep.engine_value, reasons, "value")
    doc["oracle"] = _num(rep.oracle_value, reasons, "oracle")
    doc["abs_error"] = _num(rep.abs_error, reasons, "abs_error")
    doc["rel_error"] = _num(rep.rel_error, reasons, "rel_error")
    for key in ("value", "oracle", "abs_error", "rel_error"):
        if doc[key] is None and key not in reasons:
            reasons[key] = "; ".join(rep.reasons) or "not applicable"
    doc["verdict"] = rep.verdict
    doc["diagnostics"] = {
        "terms_used": rep.terms_used,
        "tolerance": rep.tolerance,
        "reasons": rep.reasons,
        "null_reasons": reasons,
    }
    fmt = lambda x: "n/a" if x is None else f"{x:.17g}"
    out.append(f"engine    {fmt(rep.engine_value)}")
    out.append(f"oracle    {fmt(rep.oracle_value)}")
    out.append(f"abs_error {fmt(rep.abs_error)}")
    out.append(f"rel_error {fmt(rep.rel_error)}")
    out.append(f"terms     {rep.terms_used}")
    out.append(f"verdict   {rep.verdict} (tol {tol:g})")
    for r in rep.reasons:
        out.append(f"  reason: {r}")
    return EXIT_OK if rep.passed else EXIT_FAIL


COMMANDS = {"expand": cmd_expand, "solve": cmd_solve, "eval": cmd_eval, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit one JSON object on standard output")

    ap = argparse.ArgumentParser(
        prog="bracketeer",
        description="Definite integrals over [0, inf) by the method of brackets.",
    )
    ap.add_argument("--json", action="store_true", help="emit one JSON object on standard output")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[common], help="list bracket series representations")
    p.add_argument("expr")

    def numeric(p, with_tol=True):
        p.add_argument("expr")
        p.add_argument("--param", action="append", metavar="NAME=VALUE", default=[])
        if with_tol:
            p.add_argument("--tol", type=float, default=None)
        p.add_argument("--max-terms", type=int, default=5000)
        p.add_argument("--legacy-poch", action="store_true",
                       help="classical Pochhammer values at negative-integer arguments")

    p = sub.add_parser("solve", parents=[common], help="list series solutions")
    numeric(p, with_tol=False)
    p = sub.add_parser("eval", parents=[common], help="numeric value by the bracket method")
    numeric(p)
    p = sub.add_parser("verify", parents=[common], help="compare against numeric quadrature")
    numeric(p)
    return ap


def _error_detail(exc: BaseException) -> dict:
    d = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, DSLSyntaxError) or getattr(exc, "span", None) is not None:
        d["span"] = list(exc.span) if exc.span else None
    if getattr(exc, "name", None) is not None:
        d["name"] = exc.name
    return d


NUMERIC_KEYS = ("value", "oracle", "abs_error", "rel_error")


def _explain_nulls(doc: dict, err) -> None:
    reasons = doc["diagnostics"].setdefault("null_reasons", {})
    for key in NUMERIC_KEYS:
        if doc[key] is not None or key in reasons:
            continue
        if err is not None:
            reasons[key] = f"{type(err).__name__}: {err}"
        elif key == "value":
            reasons[key] = f"not computed by {doc['command']}"
        else:
            reasons[key] = f"oracle not run by {doc['command']}"


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    doc = _empty(args)
    out: list[str] = []
    try:
        code = COMMANDS[args.command](args, doc, out)
    except InputError as exc:
        code, err = EXIT_INPUT, exc
    except NoConvergentSolution as exc:
        code, err = EXIT_NO_CONVERGENT, exc
    except (NumericError, BracketeerError) as exc:
        code, err = EXIT_NUMERIC, exc
    else:
        err = None
    if err is not None:
        doc["error"] = _error_detail(err)
        print(f"bracketeer: {type(err).__name__}: {err}", file=sys.stderr)
    doc["exit_code"] = code
    _explain_nulls(doc, err)
    if args.json:
        print(json.dumps(doc, indent=2, allow_nan=False))
    else:
        for line in out:
            print(line)
    return code


def run_cli(args: list[str]) -> int:
    return main(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
