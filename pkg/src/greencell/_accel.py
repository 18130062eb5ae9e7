"""Backend switch for the hot kernels.

Set ``GREENCELL_DISABLE_NUMBA=1`` to force the pure-numpy path.  The flag is
read once at import time.
"""

import functools
import os

ENV_FLAG = "GREENCELL_DISABLE_NUMBA"

try:
    import numba
except ImportError:  # pragma: no cover - numba is optional
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get(ENV_FLAG, "").strip().lower() not in ("1", "true", "yes", "on")

if HAVE_NUMBA:
    njit = functools.partial(numba.njit, cache=True, nogil=True)
else:  # pragma: no cover
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f
