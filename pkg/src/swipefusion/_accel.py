"""Numba availability and the switch between compiled and pure-numpy kernels.

Set ``SWIPEFUSION_NUMBA=0`` to force the numpy fallback path.
"""
import os

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and os.environ.get("SWIPEFUSION_NUMBA", "1").lower() not in ("0", "false", "no", "off")


def njit(*args, **kwargs):
    """``numba.njit(cache=True)`` when numba is importable, identity otherwise."""
    kwargs.setdefault("cache", True)

    def wrap(fn):
        if not HAS_NUMBA:
            return fn
        return numba.njit(**kwargs)(fn)

    if args and callable(args[0]):
        return wrap(args[0])
    return wrap


def pick(numba_impl, numpy_impl):
    return numba_impl if USE_NUMBA else numpy_impl
