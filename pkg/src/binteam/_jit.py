"""Optional numba support.

Kernels decorated with :func:`njit` are compiled when numba is importable
and ``BINTEAM_DISABLE_NUMBA`` is unset (or ``0``).  Otherwise the callers in
:mod:`binteam.kernels` route to their vectorised numpy twins.
"""
import os

_flag = os.environ.get("BINTEAM_DISABLE_NUMBA", "0").strip().lower()
_disabled = _flag not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError("numba disabled by BINTEAM_DISABLE_NUMBA")
    from numba import njit as _numba_njit

    USING_NUMBA = True

    def njit(*args, **kwargs):
        kwargs.setdefault("cache", True)
        kwargs.setdefault("nogil", True)
        return _numba_njit(*args, **kwargs)

except ImportError:
    USING_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f
