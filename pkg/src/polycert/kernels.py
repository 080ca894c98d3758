"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it imports; otherwise the
pure-Python twin in ``_kernels_py`` takes over.  Setting ``POLYCERT_PURE=1``
forces the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("POLYCERT_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"

mul_packed = _impl.mul_packed
first_negative = _impl.first_negative
eval_float = _impl.eval_float
log_eval = _impl.log_eval


def backends():
    """Name -> kernel module for every backend available in this install."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        out["cython"] = _kernels
    return out
