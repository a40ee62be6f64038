"""Backend selection for the RK4 hot loops.

The Cython extension is preferred; set ``MODELTONE_PURE_PYTHON=1`` to force
the pure-Python fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
rk4_coefficient = _pykernels.rk4_coefficient
rk4_radial = _pykernels.rk4_radial

if not os.environ.get("MODELTONE_PURE_PYTHON"):
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        rk4_coefficient = _kernels.rk4_coefficient
        rk4_radial = _kernels.rk4_radial


def backends():
    """Map of available backend name -> module, compiled one first when present."""
    found = {}
    try:
        from . import _kernels
        found["cython"] = _kernels
    except ImportError:
        pass
    found["python"] = _pykernels
    return found
