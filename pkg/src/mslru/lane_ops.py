"""Primitives over one vector of P key lanes.

A vector holds P keys ordered by recency: lane 0 is the MRU position, lane P-1
the LRU position. Recency updates are permutations picked from a fixed table,
so the whole vector is rewritten in one step instead of element moves. The
module ships two interchangeable implementations:

* ``*_scalar``: plain-Python loops, the readable reference.
* the public functions below them: thin wrappers over jitted kernels, used by
  the set and cache layers.

Both must agree bit for bit on every input; tests compare them exhaustively on
random vectors. Keys are unsigned integers; the all-ones value of the lane
width is reserved as the empty-lane sentinel and is not a legal key.
"""

import numpy as np
from numba import njit

P_CHOICES = (4, 8)


def key_dtype(p):
    """Lane dtype for a P-lane vector: 64-bit keys at P=4, 32-bit at P=8."""
    if p == 4:
        return np.uint64
    if p == 8:
        return np.uint32
    raise ValueError(f"unsupported lane count {p}, expected one of {P_CHOICES}")


def sentinel_key(p):
    """The reserved empty-lane marker: all bits set for the lane width."""
    return key_dtype(p)(np.iinfo(key_dtype(p)).max)


def permutation_table(p):
    """The P-row permutation table for recency updates.

    Row i moves lane i to the front, pushes lanes 0..i-1 down by one, and
    leaves lanes i+1..P-1 alone. Row 0 is the identity. Entry table[i][j]
    names the source lane whose key lands in lane j.
    """
    if p not in P_CHOICES:
        raise ValueError(f"unsupported lane count {p}")
    table = np.empty((p, p), dtype=np.int64)
    for i in range(p):
        table[i, 0] = i
        for j in range(1, i + 1):
            table[i, j] = j - 1
        for j in range(i + 1, p):
            table[i, j] = j
    return table


# ---------------------------------------------------------------------------
# scalar reference

def apply_permutation_scalar(lanes, row):
    return [lanes[src] for src in row]


def match_lane_scalar(lanes, key):
    """Index of the lane holding ``key``, or None. At most one lane may match."""
    found = None
    for j, lane in enumerate(lanes):
        if lane == key:
            assert found is None, "duplicate key in vector"
            found = j
    return found


def promote_scalar(lanes, i):
    """Move lane i to the MRU position, shifting lanes 0..i-1 down by one."""
    assert 0 <= i < len(lanes)
    return [lanes[i]] + list(lanes[:i]) + list(lanes[i + 1:])


def rotate_lru_to_front_scalar(lanes):
    return promote_scalar(lanes, len(lanes) - 1)


def replace_lane0_scalar(lanes, key):
    """Overwrite the MRU lane with ``key``, which must not already be present."""
    assert match_lane_scalar(lanes, key) is None, "key already present"
    out = list(lanes)
    out[0] = key
    return out


# ---------------------------------------------------------------------------
# jitted fast path

@njit(cache=True, nogil=True, inline="always")
def _match(lanes, key):
    for j in range(lanes.shape[0]):
        if lanes[j] == key:
            return j
    return -1


@njit(cache=True, nogil=True, inline="always")
def _pull_to_front(lanes, i):
    # In-place application of permutation-table row i.
    tmp = lanes[i]
    for j in range(i, 0, -1):
        lanes[j] = lanes[j - 1]
    lanes[0] = tmp


@njit(cache=True, nogil=True)
def _promote(lanes, i):
    out = lanes.copy()
    _pull_to_front(out, i)
    return out


def match_lane(lanes, key):
    lanes = np.asarray(lanes)
    j = _match(lanes, lanes.dtype.type(key))
    return None if j < 0 else int(j)


def promote(lanes, i):
    lanes = np.asarray(lanes)
    assert 0 <= i < lanes.shape[0]
    return _promote(lanes, i)


def rotate_lru_to_front(lanes):
    lanes = np.asarray(lanes)
    return _promote(lanes, lanes.shape[0] - 1)


def replace_lane0(lanes, key):
    lanes = np.asarray(lanes)
    key = lanes.dtype.type(key)
    assert _match(lanes, key) < 0, "key already present"
    out = lanes.copy()
    out[0] = key
    return out


def apply_permutation(lanes, row):
    lanes = np.asarray(lanes)
    return lanes[np.asarray(row)]
