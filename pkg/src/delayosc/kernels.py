"""Backend selection for the hot kernels.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``DELAYOSC_PURE_PYTHON`` is set to a non-empty value,
the NumPy fallback is used. ``BACKEND`` names the active choice.
"""

import os

from . import _purepy

if os.environ.get("DELAYOSC_PURE_PYTHON"):
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

if _compiled is not None:
    eval_packed = _compiled.eval_packed
    eval_poly_packed = _compiled.eval_poly_packed
    rk4_march = _compiled.rk4_march
    BACKEND = "cython"
else:
    eval_packed = _purepy.eval_packed
    eval_poly_packed = _purepy.eval_poly_packed
    rk4_march = _purepy.rk4_march
    BACKEND = "python"

__all__ = ["eval_packed", "eval_poly_packed", "rk4_march", "BACKEND", "compiled_available"]


def compiled_available() -> bool:
    try:
        from . import _kernels  # noqa: F401
    except ImportError:
        return False
    return True
