"""Numba detection and the switch between compiled and pure-numpy kernels.

Set ``HSG_DISABLE_NUMBA=1`` to force the numpy fallback.  ``HSG_THREADS``
caps the number of threads used by parallel kernels.
"""
import os

_FALSY = ("", "0", "false", "no", "off")

try:
    import numba
    from numba import njit, prange

    HAVE_NUMBA = True
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # the system TBB is too old for numba; avoid the probe warning
        numba.config.THREADING_LAYER = "workqueue"
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f

    prange = range


def numba_disabled():
    return os.environ.get("HSG_DISABLE_NUMBA", "").strip().lower() not in _FALSY


USE_NUMBA = HAVE_NUMBA and not numba_disabled()


def _apply_thread_cap():
    cap = os.environ.get("HSG_THREADS")
    if not cap or not HAVE_NUMBA:
        return
    try:
        n = int(cap)
    except ValueError:
        return
    n = max(1, min(n, numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(n)


_apply_thread_cap()

__all__ = ["HAVE_NUMBA", "USE_NUMBA", "njit", "prange", "numba_disabled"]
