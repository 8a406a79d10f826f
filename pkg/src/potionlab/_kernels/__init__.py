"""Kernel backend selection.

The hot inner loops (per-character distortion decisions, exact signed-rank
distribution) exist twice: a Cython extension and a pure-Python fallback.
The compiled one is preferred; set ``POTIONLAB_PURE=1`` to force the
fallback (used by the benchmark and the cross-backend tests).
"""

import os

if os.environ.get("POTIONLAB_PURE"):
    from potionlab._kernels import _pure as _impl
else:
    try:
        from potionlab._kernels import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        from potionlab._kernels import _pure as _impl

BACKEND = _impl.BACKEND
rand_unit = _impl.rand_unit
distort_text = _impl.distort_text
signed_rank_counts = _impl.signed_rank_counts
