"""Hot-kernel backend selection.

The compiled extension is preferred; the pure-numpy fallback is selected
automatically when the extension is missing (or when the environment
variable ``CAPROB_KERNELS=numpy`` forces it). Both backends return
identical integer counts and distances, so selection never changes
results, only speed. ``benchmarks/bench_kernels.py`` compares the two.
"""

import os

from . import numpy_backend

_FORCED = os.environ.get("CAPROB_KERNELS", "").strip().lower()

if _FORCED == "numpy":
    _impl = numpy_backend
    _BACKEND = "numpy"
else:
    try:
        from . import _native as _impl

        _BACKEND = "native"
    except ImportError:
        _impl = numpy_backend
        _BACKEND = "numpy"


def backend():
    """Name of the active backend: 'native' or 'numpy'."""
    return _BACKEND


hist2d = _impl.hist2d
hist1d = _impl.hist1d
chebyshev_kth_radius = _impl.chebyshev_kth_radius
chebyshev_count_within = _impl.chebyshev_count_within

__all__ = [
    "backend",
    "hist2d",
    "hist1d",
    "chebyshev_kth_radius",
    "chebyshev_count_within",
    "numpy_backend",
]
