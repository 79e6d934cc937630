"""Numba/NumPy backend selection for the hot kernels.

The pairwise kernels in ``_loops`` are compiled with numba unless the
environment variable ``CRAMERWOLD_DISABLE_NUMBA`` is set to a truthy value
(or numba is not importable), in which case the vectorized NumPy
implementations in ``_vectorized`` take over.
"""

import os

_DISABLE = os.environ.get("CRAMERWOLD_DISABLE_NUMBA", "").lower() in ("1", "true", "yes")

HAS_NUMBA = False
if not _DISABLE:
    try:
        import numba

        HAS_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        HAS_NUMBA = False

BACKEND = "numba" if HAS_NUMBA else "numpy"


def maybe_njit(*args, **kwargs):
    """numba.njit when the numba backend is active, identity otherwise."""
    if HAS_NUMBA:
        return numba.njit(*args, **kwargs)

    def wrap(fn):
        return fn

    return wrap


def set_threads(threads):
    """Cap the numba thread pool. A no-op on the NumPy backend."""
    if threads < 1:
        raise ValueError("threads must be >= 1")
    if HAS_NUMBA:
        limit = numba.config.NUMBA_NUM_THREADS
        numba.set_num_threads(max(1, min(threads, limit)))
