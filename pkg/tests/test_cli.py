import json
import math
import subprocess
import sys

import pytest

from bracketeer.cli import main

ENTRY = "besselj(0,a*x)*sin(b*x)"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--json", *argv)
    return code, json.loads(out), err


def assert_nulls_explained(doc):
    reasons = doc["diagnostics"]["null_reasons"]
    for key in ("value", "oracle", "abs_error", "rel_error"):
        if doc[key] is None:
            assert reasons.get(key)
        else:
            assert math.isfinite(doc[key])


def test_verify_pass(capsys):
    code, out, _ = run(capsys, "verify", ENTRY, "--param", "a=1", "--param", "b=2", "--tol", "1e-5")
    assert code == 0
    assert "verdict   pass" in out


def test_eval_outside_region(capsys):
    code, out, err = run(capsys, "eval", ENTRY, "--param", "a=2", "--param", "b=1")
    assert code == 3
    assert out == ""
    assert "NoConvergentSolution" in err


def test_expand_syntax_error(capsys):
    code, doc, err = run_json(capsys, "expand", "sin(q*x")
    assert code == 2
    assert doc["error"]["type"] == "DSLSyntaxError"
    assert doc["error"]["span"] == [7, 7]
    assert "DSLSyntaxError" in err


def test_unbound_parameter(capsys):
    code, doc, _ = run_json(capsys, "eval", ENTRY, "--param", "a=1")
    assert code == 2
    assert doc["error"] == {"type": "UnboundParameter", "message": "no binding for 'b'", "name": "b"}


def test_bad_param_syntax(capsys):
    assert run(capsys, "eval", ENTRY, "--param", "a")[0] == 2
    assert run(capsys, "eval", ENTRY, "--param", "a=one", "--param", "b=2")[0] == 2


def test_usage_error(capsys):
    assert run(capsys, "frobnicate")[0] == 2


def test_eval_value(capsys):
    code, out, _ = run(capsys, "eval", ENTRY, "--param", "a=1/2", "--param", "b=1.3")
    assert code == 0
    assert float(out) == pytest.approx(1 / 1.2, rel=1e-12)


def test_legacy_halves(capsys):
    _, full, _ = run_json(capsys, "eval", ENTRY, "--param", "a=1", "--param", "b=2")
    _, half, _ = run_json(capsys, "eval", ENTRY, "--param", "a=1", "--param", "b=2", "--legacy-poch")
    assert abs(half["value"] / full["value"] - 0.5) <= 1e-12
    # nothing but the Pochhammer handling differs
    assert half["representations"] == full["representations"]
    strip = lambda sols: [{k: v for k, v in s.items() if k not in ("value",)} for s in sols]
    assert strip(half["solutions"]) == strip(full["solutions"])


def test_json_schema(capsys):
    code, doc, _ = run_json(capsys, "eval", ENTRY, "--param", "a=1", "--param", "b=2")
    assert code == 0
    for key in (
        "schema_version",
        "input",
        "representations",
        "solutions",
        "value",
        "oracle",
        "abs_error",
        "rel_error",
        "verdict",
        "diagnostics",
    ):
        assert key in doc
    assert doc["schema_version"] == 1
    (rep,) = doc["representations"]
    assert rep["index"] == 1 and rep["indices"] == ["n1", "n2"] and rep["brackets"] == ["2*n1 + 2*n2 + 2"]
    kinds = sorted(s["classification"].split("(")[0] for s in doc["solutions"])
    assert kinds == ["convergent", "null"]
    for s in doc["solutions"]:
        assert set(s) >= {"free_indices", "substitutions", "weight", "classification"}
    assert_nulls_explained(doc)


def test_json_roundtrip_all_commands(capsys):
    for argv in (
        ["expand", ENTRY],
        ["solve", ENTRY, "--param", "a=1", "--param", "b=2"],
        ["eval", ENTRY, "--param", "a=1", "--param", "b=2"],
        ["eval", ENTRY, "--param", "a=2", "--param", "b=1"],
        ["verify", ENTRY, "--param", "a=1", "--param", "b=2", "--tol", "1e-5"],
        ["verify", ENTRY, "--param", "a=2", "--param", "b=1", "--tol", "1e-5"],
    ):
        code, out, _ = run(capsys, "--json", *argv)
        doc = json.loads(out)
        assert json.loads(json.dumps(doc)) == doc
        assert doc["exit_code"] == code
        assert_nulls_explained(doc)


def test_verify_fail_exit(capsys):
    code, doc, _ = run_json(capsys, "verify", ENTRY, "--param", "a=1", "--param", "b=2", "--tol", "1e-5", "--legacy-poch")
    assert code == 1
    assert doc["verdict"] == "fail"
    assert doc["rel_error"] == pytest.approx(0.5, abs=1e-9)


def test_verify_region_failure_exit(capsys):
    code, doc, _ = run_json(capsys, "verify", ENTRY, "--param", "a=2", "--param", "b=1", "--tol", "1e-5")
    assert code == 1
    assert doc["value"] is None and doc["oracle"] is not None


def test_expand_text(capsys):
    code, out, _ = run(capsys, "expand", "x^(s-1)*(1+x)^(-al)")
    assert code == 0
    assert out.count("index 0") == 3
    assert "* [0:binomial[0]+P1]" in out


def test_solve_text(capsys):
    code, out, _ = run(capsys, "solve", ENTRY)
    assert code == 0
    assert "1F0(1/2; ; a^2*b^-2)" in out
    assert "weight 1/2" in out


def test_env_tolerance(capsys, monkeypatch):
    monkeypatch.setenv("BRACKETEER_TOL", "1e-3")
    _, doc, _ = run_json(capsys, "eval", "exp(-x)")
    assert doc["diagnostics"]["tol"] == 1e-3
    monkeypatch.setenv("BRACKETEER_TOL", "loose")
    assert run(capsys, "eval", "exp(-x)")[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "bracketeer", "eval", "exp(-x^2)"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert float(proc.stdout) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-15)


def test_numeric_failure_exit(capsys, monkeypatch):
    from bracketeer import cli
    from bracketeer.errors import OracleFailedToConverge

    def broken(*args, **kwargs):
        raise OracleFailedToConverge("stalled")

    monkeypatch.setattr(cli, "evaluate", broken)
    code, doc, err = run_json(capsys, "eval", "exp(-x)")
    assert code == 4
    assert doc["error"]["type"] == "OracleFailedToConverge"
    assert_nulls_explained(doc)
