"""Kernel backend selection.

The compiled extension is preferred when importable; setting the environment
variable PULSECAL_PURE_PYTHON (to any nonempty value) forces the numpy
fallback.  Both backends expose the same three functions.
"""

import os

from . import _kernels_py

if os.environ.get("PULSECAL_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

simulate_held = _impl.simulate_held
toeplitz_apply = _impl.toeplitz_apply
toeplitz_solve = _impl.toeplitz_solve


def backend() -> str:
    """Name of the active kernel backend: 'compiled' or 'python'."""
    return BACKEND
