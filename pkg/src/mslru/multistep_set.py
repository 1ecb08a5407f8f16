"""One cache set: M key vectors of P lanes, ordered by recency tier.

Vector 0 is the highest tier; within a vector lane 0 is the MRU position and
lane P-1 the LRU position. A hit inside a vector promotes the item with one
table permutation. A hit at lane 0 of a lower vector swaps the item with the
LRU lane of the next higher vector (an "upgrade"), so one request moves an
item at most one step. New items enter at the MRU lane of the lowest tier
that still has room; the victim on a full set is the LRU lane of the last
vector. Empty lanes hold the all-ones sentinel and stay packed at the LRU
end of each vector.

The jitted ``_set_*`` kernels below operate on whole cache arrays of shape
(num_sets, M, P) and are the single source of truth for the policy: the
``SetBlock`` object API here, the cache layer, and the benchmark batch
runners all call the same kernels. The ``_iv_*`` kernels are a deliberately
separate, simpler implementation of the M=1 case (plain in-vector LRU) used
by the ``invector`` policy; keeping the two apart lets tests compare them as
independent implementations.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit

from .lane_ops import key_dtype, sentinel_key

M_CHOICES = (1, 2, 4, 8)


@njit(cache=True, nogil=True, inline="always")
def _pull_pair(keys, vals, s, vi, j):
    # Permutation row j applied to one vector of both planes: lane j to the
    # front, lanes 0..j-1 down by one.
    tk = keys[s, vi, j]
    tv = vals[s, vi, j]
    for t in range(j, 0, -1):
        keys[s, vi, t] = keys[s, vi, t - 1]
        vals[s, vi, t] = vals[s, vi, t - 1]
    keys[s, vi, 0] = tk
    vals[s, vi, 0] = tv


@njit(cache=True, nogil=True, inline="always")
def _find_in_set(keys, s, k, empty):
    # Lowest-numbered vector wins; empty lanes are packed, so a sentinel ends
    # the scan of a vector early.
    m = keys.shape[1]
    p = keys.shape[2]
    for vi in range(m):
        for j in range(p):
            kv = keys[s, vi, j]
            if kv == k:
                return vi * p + j
            if kv == empty:
                break
    return -1


@njit(cache=True, nogil=True, inline="always")
def _hit_move(keys, vals, s, vi, j, empty):
    p = keys.shape[2]
    if j > 0:
        _pull_pair(keys, vals, s, vi, j)
    elif vi > 0:
        k = keys[s, vi, 0]
        v = vals[s, vi, 0]
        demoted = keys[s, vi - 1, p - 1]
        if demoted == empty:
            # The higher vector has room: append there, close the hole here.
            e = 0
            while keys[s, vi - 1, e] != empty:
                e += 1
            keys[s, vi - 1, e] = k
            vals[s, vi - 1, e] = v
            for t in range(p - 1):
                keys[s, vi, t] = keys[s, vi, t + 1]
                vals[s, vi, t] = vals[s, vi, t + 1]
            keys[s, vi, p - 1] = empty
            vals[s, vi, p - 1] = 0
        else:
            # Upgrade proper: swap with the higher vector's LRU lane, the
            # demoted item lands at this vector's MRU lane.
            keys[s, vi, 0] = demoted
            vals[s, vi, 0] = vals[s, vi - 1, p - 1]
            keys[s, vi - 1, p - 1] = k
            vals[s, vi - 1, p - 1] = v
    # vi == 0 and j == 0: already the set MRU, nothing moves.


@njit(cache=True, nogil=True)
def _set_get(keys, vals, s, k, empty):
    # Returns (hit vector index or -1, value).
    loc = _find_in_set(keys, s, k, empty)
    if loc < 0:
        return -1, vals[s, 0, 0]
    p = keys.shape[2]
    vi = loc // p
    j = loc - vi * p
    val = vals[s, vi, j]
    _hit_move(keys, vals, s, vi, j, empty)
    return vi, val


PUT_UPDATED = 0   # key was present, value replaced
PUT_INSERTED = 1  # key took a free lane
PUT_EVICTED = 2   # key displaced the set LRU


@njit(cache=True, nogil=True)
def _set_put(keys, vals, s, k, v, empty):
    # Returns (outcome code, evicted key); the key slot holds the sentinel
    # unless the outcome is an eviction. A present key gets its value
    # replaced plus the same movement as a hit.
    loc = _find_in_set(keys, s, k, empty)
    p = keys.shape[2]
    if loc >= 0:
        vi = loc // p
        j = loc - vi * p
        vals[s, vi, j] = v
        _hit_move(keys, vals, s, vi, j, empty)
        return PUT_UPDATED, empty
    m = keys.shape[1]
    # Insert at the MRU lane of the last vector that still has room; packed
    # empties mean "has room" is visible at lane P-1.
    for vi in range(m - 1, -1, -1):
        if keys[s, vi, p - 1] == empty:
            for t in range(p - 1, 0, -1):
                keys[s, vi, t] = keys[s, vi, t - 1]
                vals[s, vi, t] = vals[s, vi, t - 1]
            keys[s, vi, 0] = k
            vals[s, vi, 0] = v
            return PUT_INSERTED, empty
    ev = keys[s, m - 1, p - 1]
    for t in range(p - 1, 0, -1):
        keys[s, m - 1, t] = keys[s, m - 1, t - 1]
        vals[s, m - 1, t] = vals[s, m - 1, t - 1]
    keys[s, m - 1, 0] = k
    vals[s, m - 1, 0] = v
    return PUT_EVICTED, ev


@njit(cache=True, nogil=True)
def _set_delete(keys, vals, s, k, empty):
    loc = _find_in_set(keys, s, k, empty)
    if loc < 0:
        return False
    p = keys.shape[2]
    vi = loc // p
    j = loc - vi * p
    for t in range(j, p - 1):
        keys[s, vi, t] = keys[s, vi, t + 1]
        vals[s, vi, t] = vals[s, vi, t + 1]
    keys[s, vi, p - 1] = empty
    vals[s, vi, p - 1] = 0
    return True


# ---------------------------------------------------------------------------
# plain in-vector LRU, the dedicated M=1 implementation

@njit(cache=True, nogil=True)
def _iv_get(keys, vals, s, k, empty):
    p = keys.shape[2]
    for j in range(p):
        kv = keys[s, 0, j]
        if kv == k:
            val = vals[s, 0, j]
            if j > 0:
                _pull_pair(keys, vals, s, 0, j)
            return 0, val
        if kv == empty:
            break
    return -1, vals[s, 0, 0]


@njit(cache=True, nogil=True)
def _iv_put(keys, vals, s, k, v, empty):
    p = keys.shape[2]
    for j in range(p):
        kv = keys[s, 0, j]
        if kv == k:
            vals[s, 0, j] = v
            if j > 0:
                _pull_pair(keys, vals, s, 0, j)
            return PUT_UPDATED, empty
        if kv == empty:
            break
    # Lane P-1 is the victim on a full vector and the sentinel otherwise, so
    # one shift-and-insert covers both cases.
    ev = keys[s, 0, p - 1]
    for t in range(p - 1, 0, -1):
        keys[s, 0, t] = keys[s, 0, t - 1]
        vals[s, 0, t] = vals[s, 0, t - 1]
    keys[s, 0, 0] = k
    vals[s, 0, 0] = v
    if ev == empty:
        return PUT_INSERTED, ev
    return PUT_EVICTED, ev


@njit(cache=True, nogil=True)
def _iv_delete(keys, vals, s, k, empty):
    p = keys.shape[2]
    for j in range(p):
        kv = keys[s, 0, j]
        if kv == empty:
            return False
        if kv == k:
            for t in range(j, p - 1):
                keys[s, 0, t] = keys[s, 0, t + 1]
                vals[s, 0, t] = vals[s, 0, t + 1]
            keys[s, 0, p - 1] = empty
            vals[s, 0, p - 1] = 0
            return True
    return False


@njit(cache=True, nogil=True)
def _audit_set(keys, s, empty):
    """0 if the set is well formed, else a small error code.

    1: sentinel followed by a valid key inside one vector (packing broken).
    2: the same key appears in two lanes of the set.
    """
    m = keys.shape[1]
    p = keys.shape[2]
    for vi in range(m):
        seen_empty = False
        for j in range(p):
            kv = keys[s, vi, j]
            if kv == empty:
                seen_empty = True
            elif seen_empty:
                return 1
    for vi in range(m):
        for j in range(p):
            kv = keys[s, vi, j]
            if kv == empty:
                break
            for vi2 in range(vi, m):
                j0 = j + 1 if vi2 == vi else 0
                for j2 in range(j0, p):
                    kv2 = keys[s, vi2, j2]
                    if kv2 == empty:
                        break
                    if kv2 == kv:
                        return 2
    return 0


# ---------------------------------------------------------------------------
# object API

@dataclass
class SetLookupResult:
    hit: bool
    value: Optional[int]
    hit_vector: Optional[int]  # 1-based; 1 is the highest-recency vector


class SetBlock:
    """A standalone set, mainly for tests and small experiments.

    Wraps (1, M, P) key/value planes plus the one-byte lock slot the cache
    layer spins on; the block itself does no locking.
    """

    def __init__(self, m, p):
        if m not in M_CHOICES:
            raise ValueError(f"unsupported vector count {m}, expected one of {M_CHOICES}")
        dt = key_dtype(p)
        self.m = m
        self.p = p
        self.empty = sentinel_key(p)
        self.keys = np.full((1, m, p), self.empty, dtype=dt)
        self.values = np.zeros((1, m, p), dtype=dt)
        self.lock = np.zeros(1, dtype=np.uint8)

    @classmethod
    def from_rows(cls, rows, p=None, values=None):
        """Build a block from per-vector key lists; None marks an empty lane.

        Rows shorter than P are padded with empty lanes. Unless given,
        values default to the keys themselves.
        """
        m = len(rows)
        if p is None:
            p = max(4, max(len(r) for r in rows))
        block = cls(m, p)
        for vi, row in enumerate(rows):
            for j, k in enumerate(row):
                if k is None:
                    continue
                block.keys[0, vi, j] = k
                block.values[0, vi, j] = k if values is None else values[vi][j]
        assert _audit_set(block.keys, 0, block.empty) == 0, "malformed set layout"
        return block

    def rows(self):
        """Key layout as nested lists with None for empty lanes."""
        out = []
        for vi in range(self.m):
            out.append([None if k == self.empty else int(k)
                        for k in self.keys[0, vi]])
        return out

    def get(self, key):
        key = self.keys.dtype.type(key)
        assert key != self.empty, "sentinel is not a legal key"
        vi, val = _set_get(self.keys, self.values, 0, key, self.empty)
        if vi < 0:
            return SetLookupResult(False, None, None)
        return SetLookupResult(True, int(val), int(vi) + 1)

    def put(self, key, value=None):
        """Insert or refresh a key; returns the evicted key or None."""
        key = self.keys.dtype.type(key)
        assert key != self.empty, "sentinel is not a legal key"
        v = key if value is None else self.values.dtype.type(value)
        code, ev = _set_put(self.keys, self.values, 0, key, v, self.empty)
        return int(ev) if code == PUT_EVICTED else None

    def delete(self, key):
        key = self.keys.dtype.type(key)
        assert key != self.empty, "sentinel is not a legal key"
        return bool(_set_delete(self.keys, self.values, 0, key, self.empty))

    def audit(self):
        code = int(_audit_set(self.keys, 0, self.empty))
        assert code == 0, f"set audit failed with code {code}"
        return True


def set_get(block, key):
    return block.get(key)


def set_put(block, key, value=None):
    return block.put(key, value)


def set_delete(block, key):
    return block.delete(key)
