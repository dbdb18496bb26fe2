"""Selects the composition kernel at import time.

The compiled extension is optional; MBIM_PURE=1 forces the pure-Python
mirror even when the extension built (used by the benchmark and by the
parity test).
"""
import os

from . import _kernels_py

COMPILED = False
if not os.environ.get("MBIM_PURE"):
    try:
        from . import _speedups as _impl

        COMPILED = True
    except ImportError:
        _impl = _kernels_py
else:
    _impl = _kernels_py

compose_cols_mod = _impl.compose_cols_mod
compose_cols_obj = _impl.compose_cols_obj
box_first_difference = getattr(_impl, "box_first_difference", _kernels_py.box_first_difference)
