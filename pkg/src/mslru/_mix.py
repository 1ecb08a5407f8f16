"""64-bit mixing primitives shared by set hashing, key scrambling, and PRNG streams.

Each helper exists twice: a jitted version used inside kernels and a plain-Python
reference (suffix ``_ref``) used by tests and by code paths where a numpy scalar
would warn on wrap-around. The pair must agree bit for bit.
"""

import numpy as np
from numba import njit

U64_MASK = 0xFFFFFFFFFFFFFFFF

# splitmix64 increment and mix constants (Steele et al.).
_SM_GAMMA = 0x9E3779B97F4A7C15
_SM_MUL1 = 0xBF58476D1CE4E5B9
_SM_MUL2 = 0x94D049BB133111EB

# MurmurHash3 64-bit finalizer constants.
_FM_MUL1 = 0xFF51AFD7ED558CCD
_FM_MUL2 = 0xC4CEB9FE1A85EC53


def splitmix64_ref(state):
    """Advance a splitmix64 stream. Returns (new_state, output), plain ints."""
    state = (state + _SM_GAMMA) & U64_MASK
    z = state
    z = ((z ^ (z >> 30)) * _SM_MUL1) & U64_MASK
    z = ((z ^ (z >> 27)) * _SM_MUL2) & U64_MASK
    z = z ^ (z >> 31)
    return state, z


def fmix64_ref(x):
    x &= U64_MASK
    x ^= x >> 33
    x = (x * _FM_MUL1) & U64_MASK
    x ^= x >> 33
    x = (x * _FM_MUL2) & U64_MASK
    x ^= x >> 33
    return x


@njit(cache=True, nogil=True)
def splitmix64(state):
    state = state + np.uint64(_SM_GAMMA)
    z = state
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_SM_MUL1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_SM_MUL2)
    z = z ^ (z >> np.uint64(31))
    return state, z


@njit(cache=True, nogil=True)
def fmix64(x):
    x ^= x >> np.uint64(33)
    x *= np.uint64(_FM_MUL1)
    x ^= x >> np.uint64(33)
    x *= np.uint64(_FM_MUL2)
    x ^= x >> np.uint64(33)
    return x


@njit(cache=True, nogil=True)
def uniform01(z):
    # 53 random bits into [0, 1); matches the _ref arithmetic exactly.
    return np.float64(z >> np.uint64(11)) * (1.0 / 9007199254740992.0)


def stream_seed(seed, stream):
    """Decorrelated 64-bit seed for a numbered generator stream."""
    return fmix64_ref((seed & U64_MASK) ^ ((stream + 1) * _SM_GAMMA))
