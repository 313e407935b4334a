"""Optional numba acceleration for the numeric kernels.

The jit path is taken when numba imports cleanly and FINGERTAP_NO_NUMBA is
unset. Otherwise ``njit`` degrades to a no-op decorator and the kernels run
as plain interpreted numpy code, so the package works without a compiler.
"""

import logging
import os

logger = logging.getLogger(__name__)

FORCE_PURE = os.environ.get("FINGERTAP_NO_NUMBA", "").strip().lower() in (
    "1",
    "true",
    "yes",
)

try:
    if FORCE_PURE:
        raise ImportError("FINGERTAP_NO_NUMBA is set")
    from numba import njit

    NUMBA_ENABLED = True
except ImportError:
    NUMBA_ENABLED = False

    def njit(*args, **kwargs):
        """No-op stand-in so the kernels run under the interpreter."""

        def wrap(func):
            return func

        if args and callable(args[0]):
            return args[0]
        return wrap

    logger.debug("numba disabled; numeric kernels run interpreted")
