"""Election ranking kernels: compiled core with a pure-numpy fallback.

Both implementations share one contract and produce bit-identical output;
``REPLICATOR_ELECTIONS_PURE=1`` forces the fallback (used by the kernel
equivalence tests and the benchmark).
"""

import os

if os.environ.get("REPLICATOR_ELECTIONS_PURE"):
    from .numpy_kernel import rank_elections

    ACTIVE_KERNEL = "numpy"
else:
    try:
        from ._core import rank_elections  # type: ignore[no-redef]

        ACTIVE_KERNEL = "cython"
    except ImportError:  # extension not built
        from .numpy_kernel import rank_elections  # type: ignore[no-redef]

        ACTIVE_KERNEL = "numpy"

__all__ = ["rank_elections", "ACTIVE_KERNEL"]
