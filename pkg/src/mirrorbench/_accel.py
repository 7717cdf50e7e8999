"""Numba switch.

Set ``MIRRORBENCH_DISABLE_NUMBA=1`` to force the pure-numpy kernels.  The flag
is read once at import time.
"""
import os

_FLAG = os.environ.get("MIRRORBENCH_DISABLE_NUMBA", "").strip().lower()

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    _numba = None

NUMBA_ENABLED = _numba is not None and _FLAG not in ("1", "true", "yes", "on")


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise an identity decorator."""
    if _numba is not None:
        kwargs.setdefault("cache", True)
        return _numba.njit(*args, **kwargs)

    def wrap(fn):
        return fn

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return wrap
