"""Definite integrals over ``[0, inf)`` by the method of brackets."""

from .core import AffineForm, BracketSeries, GammaProduct, IndexVar, SeriesSolution
from .engine import choose_representation, combine, enumerate_solutions, to_hypergeometric
from .errors import BracketeerError, NoConvergentSolution
from .harness import verify
from .kernels import BACKEND
from .parser import parse
from .pipeline import evaluate
from .pochhammer import poch_E4, regularized_term_value
from .quadrature import quadrature_oracle

__version__ = "0.1.0"

__all__ = [
    "AffineForm",
    "BACKEND",
    "BracketSeries",
    "BracketeerError",
    "GammaProduct",
    "IndexVar",
    "NoConvergentSolution",
    "SeriesSolution",
    "choose_representation",
    "combine",
    "enumerate_solutions",
    "evaluate",
    "parse",
    "poch_E4",
    "quadrature_oracle",
    "regularized_term_value",
    "to_hypergeometric",
    "verify",
]
