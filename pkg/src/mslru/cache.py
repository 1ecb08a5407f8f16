"""Whole-cache assembly: set-addressed storage, per-set locks, configuration.

A vectorized cache is three flat numpy planes, keys and values of shape
(num_sets, M, P) plus one lock byte per set. Keys map to sets with the
64-bit MurmurHash3 finalizer modulo num_sets; the finalizer alone is enough
because keys are already integers. The same layer wraps the list-based
baseline policies behind one object surface so experiment code never
branches on the policy kind.

Concurrency contract: each operation takes exactly the one set lock it
touches for the duration of the lane moves, so per-key linearizability
holds and no operation blocks outside its own set. Eviction decisions never
look beyond the set either; the policies are strictly set-local.
"""

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from numba import njit

from ._mix import fmix64, fmix64_ref
from .lane_ops import P_CHOICES, key_dtype, sentinel_key
from .locking import acquire, release
from .multistep_set import (M_CHOICES, PUT_EVICTED, _audit_set, _iv_delete,
                            _iv_get, _iv_put, _set_delete, _set_get, _set_put)

VECTOR_POLICIES = ("multistep", "invector")
LIST_POLICIES = ("lru", "gclock", "arc")
POLICIES = VECTOR_POLICIES + LIST_POLICIES


def hash_to_set(key, num_sets):
    """Set index for a key; pure function of (key, num_sets)."""
    return fmix64_ref(int(key)) % num_sets


@dataclass(frozen=True)
class CacheConfig:
    """Cache shape and policy choice.

    For the vectorized policies give either num_sets or capacity (items);
    the other is derived, and capacity must split evenly into sets of M*P
    lanes. The invector policy is the M=1 special case and forces m to 1.
    List policies (lru, gclock, arc) only need capacity.
    """

    policy: str
    num_sets: Optional[int] = None
    m: int = 2
    p: int = 4
    capacity: Optional[int] = None

    def __post_init__(self):
        if self.policy not in POLICIES:
            raise ValueError(f"unknown policy {self.policy!r}")
        if self.policy in VECTOR_POLICIES:
            if self.policy == "invector":
                object.__setattr__(self, "m", 1)
            if self.m not in M_CHOICES:
                raise ValueError(f"m must be one of {M_CHOICES}")
            if self.p not in P_CHOICES:
                raise ValueError(f"p must be one of {P_CHOICES}")
            lanes = self.m * self.p
            if self.num_sets is None and self.capacity is None:
                raise ValueError("need num_sets or capacity")
            if self.num_sets is None:
                if self.capacity % lanes:
                    raise ValueError(
                        f"capacity {self.capacity} not divisible by {lanes} lanes/set")
                object.__setattr__(self, "num_sets", self.capacity // lanes)
            derived = self.num_sets * lanes
            if self.capacity is None:
                object.__setattr__(self, "capacity", derived)
            elif self.capacity != derived:
                raise ValueError(
                    f"capacity {self.capacity} != num_sets*m*p = {derived}")
            if self.num_sets < 1:
                raise ValueError("num_sets must be positive")
        else:
            if self.capacity is None and self.num_sets is not None:
                object.__setattr__(self, "capacity", self.num_sets * self.m * self.p)
            if self.capacity is None or self.capacity < 1:
                raise ValueError("list policies need a positive capacity")

    @property
    def is_vectorized(self):
        return self.policy in VECTOR_POLICIES


@dataclass
class CacheLookup:
    hit: bool
    value: Optional[int]
    # 1-based vector number for vectorized policies, "t1"/"t2" for arc,
    # None otherwise.
    location: Union[int, str, None]


# ---------------------------------------------------------------------------
# jitted per-operation entry points

@njit(nogil=True, inline="always")
def _set_index(keys, k):
    return np.int64(fmix64(np.uint64(k)) % np.uint64(keys.shape[0]))


@njit(nogil=True)
def _locked_get(keys, vals, locks, k, empty, iv):
    s = _set_index(keys, k)
    acquire(locks, s)
    if iv:
        vi, val = _iv_get(keys, vals, s, k, empty)
    else:
        vi, val = _set_get(keys, vals, s, k, empty)
    release(locks, s)
    return vi, val


@njit(nogil=True)
def _locked_put(keys, vals, locks, k, v, empty, iv):
    s = _set_index(keys, k)
    acquire(locks, s)
    if iv:
        code, ev = _iv_put(keys, vals, s, k, v, empty)
    else:
        code, ev = _set_put(keys, vals, s, k, v, empty)
    release(locks, s)
    return code, ev


@njit(nogil=True)
def _locked_delete(keys, vals, locks, k, empty, iv):
    s = _set_index(keys, k)
    acquire(locks, s)
    if iv:
        ok = _iv_delete(keys, vals, s, k, empty)
    else:
        ok = _set_delete(keys, vals, s, k, empty)
    release(locks, s)
    return ok


@njit(nogil=True)
def _garbage_fill(keys, vals, empty, iv):
    # Fill every lane through the normal insert path with distinct keys
    # taken descending from just below the sentinel, far above any workload
    # key. Returns the number of lanes left unfilled (0 on success).
    num_sets = keys.shape[0]
    p = keys.shape[2]
    remaining = num_sets * keys.shape[1] * p
    limit = 64 * remaining + 4096
    it = 0
    while remaining > 0 and it < limit:
        k = empty - np.uint64(it + 1)
        s = _set_index(keys, k)
        room = False
        for vi in range(keys.shape[1]):
            if keys[s, vi, p - 1] == empty:
                room = True
                break
        if room:
            if iv:
                _iv_put(keys, vals, s, k, k, empty)
            else:
                _set_put(keys, vals, s, k, k, empty)
            remaining -= 1
        it += 1
    return remaining


@njit(nogil=True)
def _count_occupied(keys, empty):
    n = 0
    for s in range(keys.shape[0]):
        for vi in range(keys.shape[1]):
            for j in range(keys.shape[2]):
                if keys[s, vi, j] != empty:
                    n += 1
    return n


@njit(nogil=True)
def _audit_arrays(keys, empty):
    # (set, code): code 1 packing, 2 duplicate, 3 wrong set for a key.
    for s in range(keys.shape[0]):
        c = _audit_set(keys, s, empty)
        if c != 0:
            return s, c
        for vi in range(keys.shape[1]):
            for j in range(keys.shape[2]):
                k = keys[s, vi, j]
                if k == empty:
                    break
                if _set_index(keys, k) != s:
                    return s, 3
    return -1, 0


class SetAssociativeCache:
    """Key-value cache over the vectorized replacement kernels.

    init="empty" starts with all lanes empty; init="random" fills every
    lane with distinct garbage keys from outside any workload's key range,
    modelling a cache whose contents are useless rather than absent.
    """

    def __init__(self, config, init="empty"):
        if not config.is_vectorized:
            raise ValueError("config does not name a vectorized policy")
        dt = key_dtype(config.p)
        self.config = config
        self.empty = sentinel_key(config.p)
        self.use_invector = config.policy == "invector"
        self.keys = np.full((config.num_sets, config.m, config.p), self.empty,
                            dtype=dt)
        self.values = np.zeros_like(self.keys)
        self.locks = np.zeros(config.num_sets, dtype=np.uint8)
        if init == "random":
            left = _garbage_fill(self.keys, self.values, self.empty,
                                 self.use_invector)
            assert left == 0, f"garbage fill left {left} lanes empty"
        elif init != "empty":
            raise ValueError(f"unknown init mode {init!r}")

    @property
    def capacity(self):
        return self.config.capacity

    def __len__(self):
        return int(_count_occupied(self.keys, self.empty))

    def _key(self, key):
        k = self.keys.dtype.type(key)
        assert k == key, "key exceeds the lane width for this P"
        assert k != self.empty, "sentinel is not a legal key"
        return k

    def get(self, key):
        vi, val = _locked_get(self.keys, self.values, self.locks,
                              self._key(key), self.empty, self.use_invector)
        if vi < 0:
            return CacheLookup(False, None, None)
        return CacheLookup(True, int(val), int(vi) + 1)

    def put(self, key, value=None):
        k = self._key(key)
        v = k if value is None else self.values.dtype.type(value)
        code, ev = _locked_put(self.keys, self.values, self.locks, k, v,
                               self.empty, self.use_invector)
        return int(ev) if code == PUT_EVICTED else None

    def delete(self, key):
        return bool(_locked_delete(self.keys, self.values, self.locks,
                                   self._key(key), self.empty,
                                   self.use_invector))

    def set_rows(self, s):
        """Key layout of one set as nested lists, None for empty lanes."""
        return [[None if k == self.empty else int(k) for k in row]
                for row in self.keys[s]]

    def audit(self):
        """Structural invariants: lane packing, no duplicates in a set,
        every key resident in its hash set, all locks free."""
        s, code = _audit_arrays(self.keys, self.empty)
        assert code == 0, f"set {s} failed audit with code {code}"
        assert not self.locks.any(), "a set lock was left held"
        return True

    def stats(self):
        return {
            "policy": self.config.policy,
            "num_sets": self.config.num_sets,
            "m": self.config.m,
            "p": self.config.p,
            "capacity": self.capacity,
            "size": len(self),
        }


class ListPolicyCache:
    """The baseline policies behind the same surface as the vector cache."""

    def __init__(self, config, init="empty"):
        from . import baselines
        if config.is_vectorized:
            raise ValueError("config names a vectorized policy")
        maker = {"lru": baselines.LruCache,
                 "gclock": baselines.GclockCache,
                 "arc": baselines.ArcCache}[config.policy]
        self.config = config
        self.impl = maker(config.capacity)
        if init == "random":
            base = (1 << 64) - 2
            for i in range(config.capacity):
                self.impl.put(base - i, 0)
        elif init != "empty":
            raise ValueError(f"unknown init mode {init!r}")

    @property
    def capacity(self):
        return self.config.capacity

    def __len__(self):
        return len(self.impl)

    def get(self, key):
        return self.impl.get(key)

    def put(self, key, value=None):
        return self.impl.put(key, key if value is None else value)

    def delete(self, key):
        return self.impl.delete(key)

    def audit(self):
        return self.impl.audit()

    def stats(self):
        return {"policy": self.config.policy, "capacity": self.capacity,
                "size": len(self)}


def create_cache(config, init="empty"):
    if config.is_vectorized:
        return SetAssociativeCache(config, init=init)
    return ListPolicyCache(config, init=init)
