"""Backend selection for the hot integration kernels.

The kernels in :mod:`freebvp.kernels` are compiled with numba when it is
importable, unless ``FREEBVP_DISABLE_NUMBA`` is set to a truthy value, in
which case they run as plain numpy code. The choice is made once, at import.
"""

import os

_FALSY = {"", "0", "false", "no", "off"}


def _numba_disabled():
    return os.environ.get("FREEBVP_DISABLE_NUMBA", "").strip().lower() not in _FALSY


try:
    if _numba_disabled():
        raise ImportError("numba disabled by FREEBVP_DISABLE_NUMBA")
    from numba import njit

    NUMBA_ENABLED = True
except ImportError:
    NUMBA_ENABLED = False

BACKEND = "numba" if NUMBA_ENABLED else "numpy"


def jit(func):
    """Compile ``func`` in nopython mode, or return it untouched on the numpy backend."""
    if NUMBA_ENABLED:
        return njit(cache=True)(func)
    return func
