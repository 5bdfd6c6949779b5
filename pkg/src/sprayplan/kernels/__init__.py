"""Hot raster/audit kernels: compiled core with a NumPy fallback.

The Cython extension is optional. If it is missing (build failed) or
``SPRAYPLAN_PURE_PYTHON=1`` is set, the NumPy implementation is selected
at import time. Both backends compute bit-equal results;
``benchmarks/bench_kernels.py`` compares their throughput.
"""

import os

if os.environ.get("SPRAYPLAN_PURE_PYTHON"):
    from . import _core_py as _impl
    BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        from . import _core_py as _impl
        BACKEND = "python"

polygon_mask = _impl.polygon_mask
mark_capsule = _impl.mark_capsule
signed_distance_batch = _impl.signed_distance_batch

__all__ = ["BACKEND", "polygon_mask", "mark_capsule", "signed_distance_batch"]
