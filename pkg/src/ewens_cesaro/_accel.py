"""Backend selection for the hot loops.

Kernels are written once as plain Python loops that numba can compile.
Set ``EWENS_CESARO_PURE_NUMPY=1`` to route every call through the
vectorised numpy fallbacks instead (also used when numba is missing).
"""

import os

ENV_FLAG = "EWENS_CESARO_PURE_NUMPY"

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None


def _flag_set():
    return os.environ.get(ENV_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}


USE_NUMBA = HAVE_NUMBA and not _flag_set()


def jit(fn):
    """Compile ``fn`` with numba in nopython mode, or return None without numba."""
    if not HAVE_NUMBA:
        return None
    return numba.njit(cache=True, nogil=True)(fn)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
