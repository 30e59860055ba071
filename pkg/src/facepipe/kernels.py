"""Backend selection for the hot kernels.

The compiled extension is preferred; set FACEPIPE_PURE_PYTHON=1 to force
the numpy fallback (used by the benchmark and backend-equivalence tests).
"""

import os

if os.environ.get("FACEPIPE_PURE_PYTHON") == "1":
    from facepipe._kernels_py import BACKEND, bilinear_crop, pairwise_iou, sidelobe_stats
else:
    try:
        from facepipe._ckernels import BACKEND, bilinear_crop, pairwise_iou, sidelobe_stats
    except ImportError:
        from facepipe._kernels_py import BACKEND, bilinear_crop, pairwise_iou, sidelobe_stats

__all__ = ["BACKEND", "pairwise_iou", "bilinear_crop", "sidelobe_stats"]
