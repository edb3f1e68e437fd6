"""Backend selection for the numeric hot loops.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` module. Setting ``BRACKETEER_PURE_PYTHON=1``
forces the fallback.
"""

import os

from . import _pykernels

if os.environ.get("BRACKETEER_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "python" if _impl is _pykernels else "cython"

gamma_raw = _impl.gamma_real
bessel_j = _impl.bessel_j
eval_points = _impl.eval_points
sinpi = _impl.sinpi

KIND_EXP = _pykernels.KIND_EXP
KIND_SIN = _pykernels.KIND_SIN
KIND_COS = _pykernels.KIND_COS
KIND_BESSELJ = _pykernels.KIND_BESSELJ
KIND_MULTI = _pykernels.KIND_MULTI
