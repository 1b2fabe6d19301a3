"""Backend selection for the hot loops.

The compiled extension ``poscert._kernels`` is used when it was built;
otherwise the pure-Python module is used. Setting ``POSCERT_PURE_PYTHON=1``
forces the fallback (the benchmark and the parity tests rely on this).
"""

import os

from . import _kernels_py as pure

compiled = None
if os.environ.get("POSCERT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled
    except ImportError:  # extension not built
        compiled = None

_impl = compiled if compiled is not None else pure
BACKEND = "cython" if compiled is not None else "python"

convolve = _impl.convolve
sign_changes = _impl.sign_changes
negative_index_ratio = _impl.negative_index_ratio
aberth = _impl.aberth
fraction_free_pivot = _impl.fraction_free_pivot

__all__ = [
    "BACKEND",
    "aberth",
    "compiled",
    "convolve",
    "fraction_free_pivot",
    "negative_index_ratio",
    "pure",
    "sign_changes",
]
