"""Compiled vs pure-Python numeric kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Each kernel module is imported directly, so one process times both.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from bracketeer import _pykernels
from bracketeer.parser import integrands, parse
from bracketeer.quadrature import compile_integrand

try:
    from bracketeer import _ckernels
except ImportError:
    _ckernels = None


def cases(mod):
    rng = np.random.default_rng(0)
    gx = rng.uniform(-30.0, 170.0, 2000)
    bx = rng.uniform(0.0, 60.0, 2000)
    _, product = integrands(parse("x^(1/3)*besselj(0,a*x)*sin(b*x)*(1+x^2)^(-1/2)"))[0]
    prog = compile_integrand(product, {"a": 1, "b": 2})
    xs = np.linspace(1e-3, 200.0, 20000)
    lx = np.log(xs)
    return {
        "gamma x2000": lambda: [mod.gamma_real(float(x)) for x in gx],
        "besselj x2000": lambda: [mod.bessel_j(0.0, float(x)) for x in bx],
        "integrand x20000": lambda: mod.eval_points(prog.rows, prog.terms, xs, lx, 0.0),
    }


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    n = ap.parse_args().repeat
    backends = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    results = {name: {k: min(timeit.repeat(f, number=1, repeat=n)) for k, f in cases(mod).items()}
               for name, mod in backends}
    print(f"{'kernel':<18}" + "".join(f"{b:>12}" for b, _ in backends) + "     speedup")
    for k in results["python"]:
        row = f"{k:<18}" + "".join(f"{results[b][k] * 1e3:>10.2f}ms" for b, _ in backends)
        if "cython" in results:
            row += f"  {results['python'][k] / results['cython'][k]:>9.1f}x"
        print(row)
    if _ckernels is None:
        print("compiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
