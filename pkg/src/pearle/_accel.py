"""Optional numba acceleration.

Set ``PEARLE_DISABLE_NUMBA=1`` to force the pure-numpy kernels everywhere.
When numba is not importable the numpy kernels are used as well.
"""

import os
import warnings

_FALSY = {"", "0", "false", "no", "off"}

DISABLED_BY_ENV = os.environ.get("PEARLE_DISABLE_NUMBA", "").strip().lower() not in _FALSY

try:
    import numba

    HAVE_NUMBA = True
    # an outdated system TBB only means numba falls back to another layer
    warnings.filterwarnings("ignore", message="The TBB threading layer", category=numba.NumbaWarning)
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not DISABLED_BY_ENV

BACKENDS = ("numba", "numpy")


def resolve_backend(backend=None):
    """Map ``None``/``"auto"`` to the active backend and validate explicit names."""
    if backend is None or backend == "auto":
        return "numba" if USE_NUMBA else "numpy"
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    return backend


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise an identity decorator."""
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)
    if args and callable(args[0]):
        return args[0]
    return lambda fn: fn


prange = numba.prange if HAVE_NUMBA else range
