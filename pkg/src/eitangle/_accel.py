"""Numba switch.

Set ``EITANGLE_DISABLE_NUMBA=1`` to force the pure-numpy kernels. The flag is
read once, at import time.
"""
import os
import warnings

_FALSY = {"", "0", "false", "no", "off"}

DISABLED_BY_ENV = os.environ.get("EITANGLE_DISABLE_NUMBA", "").strip().lower() not in _FALSY

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not DISABLED_BY_ENV

if not HAVE_NUMBA and not DISABLED_BY_ENV:  # pragma: no cover
    warnings.warn("numba is not importable; using numpy kernels", RuntimeWarning)


def njit(func):
    """``numba.njit(cache=True)`` when numba is importable, else identity.

    Kernels are compiled whenever numba exists so that tests and benchmarks can
    call both paths regardless of the env flag; the flag only decides which
    path the public dispatchers use.
    """
    if not HAVE_NUMBA:  # pragma: no cover
        return func
    return numba.njit(cache=True, nogil=True)(func)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
