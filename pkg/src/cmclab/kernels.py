"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise the numpy fallback
is used. Setting ``CMC_LAB_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("CMC_LAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None
    if _compiled is not None:
        _impl = _compiled
        BACKEND = "compiled"

legendre_table = _impl.legendre_table
null_frame_geometry = _impl.null_frame_geometry

__all__ = ["BACKEND", "legendre_table", "null_frame_geometry"]
