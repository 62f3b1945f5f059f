"""Spectral-sum kernels, compiled when available.

Set ``HVDW_PURE_PYTHON=1`` to force the NumPy fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
if not os.environ.get("HVDW_PURE_PYTHON"):
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
else:
    _impl = _kernels_py

imag_axis_sum = _impl.imag_axis_sum
real_axis_sum = _impl.real_axis_sum
pair_sum = _impl.pair_sum
