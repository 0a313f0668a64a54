"""JIT switch for the hot kernels.

Set ``RELPHASE_NO_JIT=1`` (or numba's own ``NUMBA_DISABLE_JIT=1``) before import
to run the pure-numpy implementations instead of the compiled ones.
"""

import os
import warnings

_FALSY = {"", "0", "false", "no", "off"}


def _flag(name):
    return os.getenv(name, "").strip().lower() not in _FALSY


USE_NUMBA = not (_flag("RELPHASE_NO_JIT") or _flag("NUMBA_DISABLE_JIT"))

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    if USE_NUMBA:
        warnings.warn("numba not importable; falling back to numpy kernels")
    USE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda func: func
