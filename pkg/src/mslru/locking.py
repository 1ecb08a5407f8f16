"""Per-set one-byte spin locks for the jitted kernels.

numba exposes no atomics on uint8 arrays, so the two primitives are written
as llvmlite intrinsics: an exchange with acquire-release ordering for the
test-and-set loop and a release store for unlock. A lock byte is 0 when free
and 1 while held; writers spin, there is no queue. Sets are many and the
critical sections are a handful of lane moves, so contention stays low and
anything heavier than test-and-set would cost more than it saves.
"""

import numpy as np
from numba import njit, types
from numba.core import cgutils
from numba.extending import intrinsic


@intrinsic
def _atomic_xchg_u8(typingctx, arr_t, idx_t, val_t):
    sig = types.uint8(arr_t, types.intp, types.uint8)

    def codegen(context, builder, signature, args):
        arr, idx, val = args
        ary = context.make_array(signature.args[0])(context, builder, arr)
        ptr = cgutils.get_item_pointer(context, builder, signature.args[0],
                                       ary, [idx])
        return builder.atomic_rmw("xchg", ptr, val, ordering="acq_rel")

    return sig, codegen


@intrinsic
def _atomic_store_u8(typingctx, arr_t, idx_t, val_t):
    sig = types.void(arr_t, types.intp, types.uint8)

    def codegen(context, builder, signature, args):
        arr, idx, val = args
        ary = context.make_array(signature.args[0])(context, builder, arr)
        ptr = cgutils.get_item_pointer(context, builder, signature.args[0],
                                       ary, [idx])
        builder.store_atomic(val, ptr, ordering="release", align=1)
        return context.get_dummy_value()

    return sig, codegen


@njit(nogil=True, inline="always")
def acquire(locks, i):
    while _atomic_xchg_u8(locks, i, np.uint8(1)) != np.uint8(0):
        pass


@njit(nogil=True, inline="always")
def release(locks, i):
    _atomic_store_u8(locks, i, np.uint8(0))


@njit(nogil=True)
def try_acquire(locks, i):
    """Single test-and-set attempt; True when the lock was taken."""
    return _atomic_xchg_u8(locks, i, np.uint8(1)) == np.uint8(0)
