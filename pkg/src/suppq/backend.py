"""Kernel backend selection.

The compiled extension is used when it imported cleanly; the pure-Python
twin otherwise.  Set SUPPQ_PURE=1 to force the fallback (useful to compare
the two, see the `suppq bench` subcommand).
"""

import os

from suppq import _pykernels

if os.environ.get("SUPPQ_PURE"):
    kernels = _pykernels
else:
    try:
        from suppq import _ckernels as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _pykernels


def backend_name() -> str:
    return kernels.BACKEND


# Compiled kernels use 64-bit arithmetic internally; route bigger primes to
# the pure twin (arbitrary precision).
KERNEL_PRIME_LIMIT = 2**31
