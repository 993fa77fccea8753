"""Backend selection for the hot loops.

The compiled extension ``cyclophase._kernels`` is used when it imports;
otherwise, or when the environment variable ``CYCLOPHASE_PURE_PYTHON`` is
set to a non-empty value other than ``0``, the NumPy/Python fallback in
``cyclophase._kernels_py`` is used. ``BACKEND`` names the active one.
"""
import os

from . import _kernels_py

if os.environ.get("CYCLOPHASE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "cython"

residue_power_sums = _impl.residue_power_sums
circle_orbit = _impl.circle_orbit
circle_trace = _impl.circle_trace
circle_grid = _impl.circle_grid
adler_rk4 = _impl.adler_rk4

__all__ = [
    "BACKEND",
    "residue_power_sums",
    "circle_orbit",
    "circle_trace",
    "circle_grid",
    "adler_rk4",
]
