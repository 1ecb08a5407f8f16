"""Reference replacement policies: exact LRU, GCLOCK, and ARC.

Pure Python over ordered dicts and a ring buffer. These are the
correctness-first counterparts the vectorized cache is measured against, so
the code favors a one-to-one reading of each policy over speed; they still
sustain millions of operations per second, which is all the benchmarks need.

All three expose the same surface as the vectorized cache: get/put/delete,
len(), audit(), capacity. put returns the evicted key or None. delete is an
extension to GCLOCK and ARC, which classically have none; see the method
docstrings for the chosen semantics.
"""

from collections import OrderedDict

from .cache import CacheLookup

GCLOCK_REF_MAX = 15  # reference counter saturates at four bits


class LruCache:
    """Exact LRU: hash map plus recency list, here an OrderedDict with the
    most recent entry at the end."""

    def __init__(self, capacity):
        assert capacity >= 1
        self.capacity = capacity
        self._items = OrderedDict()

    def __len__(self):
        return len(self._items)

    def get(self, key):
        if key not in self._items:
            return CacheLookup(False, None, None)
        self._items.move_to_end(key)
        return CacheLookup(True, self._items[key], None)

    def put(self, key, value):
        if key in self._items:
            self._items[key] = value
            self._items.move_to_end(key)
            return None
        self._items[key] = value
        if len(self._items) > self.capacity:
            evicted, _ = self._items.popitem(last=False)
            return evicted
        return None

    def delete(self, key):
        return self._items.pop(key, _MISSING) is not _MISSING

    def audit(self):
        assert len(self._items) <= self.capacity
        return True


_MISSING = object()


class GclockCache:
    """Generalized CLOCK: a ring of slots with a saturating reference
    counter per slot.

    A hit increments the slot's counter (capped at 15) and moves nothing.
    Insertion takes a free slot when one exists; otherwise the hand sweeps
    the ring, decrementing nonzero counters, and evicts the first slot found
    at zero. The hand stays put on hits and advances past the slot it
    evicts. New entries start with a zero counter.

    delete (not part of the classic policy) frees the slot; freed slots are
    reused before any eviction, so the sweep only ever runs on a full ring.
    """

    def __init__(self, capacity):
        assert capacity >= 1
        self.capacity = capacity
        self._slots = [None] * capacity  # [key, value, refcount] or None
        self._index = {}                 # key -> slot position
        self._free = list(range(capacity - 1, -1, -1))
        self.hand = 0

    def __len__(self):
        return len(self._index)

    def get(self, key):
        pos = self._index.get(key)
        if pos is None:
            return CacheLookup(False, None, None)
        slot = self._slots[pos]
        slot[2] = min(slot[2] + 1, GCLOCK_REF_MAX)
        return CacheLookup(True, slot[1], None)

    def put(self, key, value):
        pos = self._index.get(key)
        if pos is not None:
            slot = self._slots[pos]
            slot[1] = value
            slot[2] = min(slot[2] + 1, GCLOCK_REF_MAX)
            return None
        if self._free:
            pos = self._free.pop()
            self._slots[pos] = [key, value, 0]
            self._index[key] = pos
            return None
        # Full ring: sweep from the hand, decrementing, until a zero count.
        while self._slots[self.hand][2] > 0:
            self._slots[self.hand][2] -= 1
            self.hand = (self.hand + 1) % self.capacity
        pos = self.hand
        evicted = self._slots[pos][0]
        del self._index[evicted]
        self._slots[pos] = [key, value, 0]
        self._index[key] = pos
        self.hand = (pos + 1) % self.capacity
        return evicted

    def delete(self, key):
        pos = self._index.pop(key, None)
        if pos is None:
            return False
        self._slots[pos] = None
        self._free.append(pos)
        return True

    def audit(self):
        assert len(self._index) + len(self._free) == self.capacity
        for key, pos in self._index.items():
            slot = self._slots[pos]
            assert slot is not None and slot[0] == key
            assert 0 <= slot[2] <= GCLOCK_REF_MAX
        for pos in self._free:
            assert self._slots[pos] is None
        return True


class ArcCache:
    """Adaptive Replacement Cache.

    Four lists: T1/T2 hold resident entries (recency and frequency sides),
    B1/B2 the ghost history of keys evicted from each side. The target size
    p of T1 adapts on ghost hits. The case analysis in put() follows the
    textbook statement of the algorithm line by line; get() covers only the
    resident-hit case, because in the get-then-put flow the miss path falls
    through to put(), which handles the ghost cases.

    delete removes the key from whichever list holds it; it reports True
    only when the key was resident (a ghost entry holds no value).
    """

    def __init__(self, capacity):
        assert capacity >= 1
        self.capacity = capacity
        self.p = 0.0
        self.t1 = OrderedDict()
        self.t2 = OrderedDict()
        self.b1 = OrderedDict()
        self.b2 = OrderedDict()

    def __len__(self):
        return len(self.t1) + len(self.t2)

    def get(self, key):
        if key in self.t1:
            value = self.t1.pop(key)
            self.t2[key] = value
            return CacheLookup(True, value, "t1")
        if key in self.t2:
            self.t2.move_to_end(key)
            return CacheLookup(True, self.t2[key], "t2")
        return CacheLookup(False, None, None)

    def _replace(self, in_b2):
        # Evict the LRU of T1 into B1 when T1 exceeds its target (or meets it
        # on a B2 ghost hit), else the LRU of T2 into B2.
        if self.t1 and (len(self.t1) > self.p or
                        (in_b2 and len(self.t1) == self.p) or not self.t2):
            key, _ = self.t1.popitem(last=False)
            self.b1[key] = None
        else:
            key, _ = self.t2.popitem(last=False)
            self.b2[key] = None
        return key

    def put(self, key, value):
        c = self.capacity
        if key in self.t1 or key in self.t2:
            if key in self.t1:
                self.t1.pop(key)
            else:
                self.t2.pop(key)
            self.t2[key] = value
            return None

        if key in self.b1:
            self.p = min(float(c),
                         self.p + max(1.0, len(self.b2) / len(self.b1)))
            evicted = self._replace(False) if len(self) >= c else None
            del self.b1[key]
            self.t2[key] = value
            return evicted

        if key in self.b2:
            self.p = max(0.0,
                         self.p - max(1.0, len(self.b1) / len(self.b2)))
            evicted = self._replace(True) if len(self) >= c else None
            del self.b2[key]
            self.t2[key] = value
            return evicted

        evicted = None
        l1 = len(self.t1) + len(self.b1)
        if l1 == c:
            if len(self.t1) < c:
                self.b1.popitem(last=False)
                if len(self) >= c:
                    evicted = self._replace(False)
            else:
                # B1 empty and T1 full of resident pages: drop its LRU
                # outright, no ghost recorded.
                evicted, _ = self.t1.popitem(last=False)
        else:
            total = l1 + len(self.t2) + len(self.b2)
            if total >= c:
                if total == 2 * c and self.b2:
                    self.b2.popitem(last=False)
                if len(self) >= c:
                    evicted = self._replace(False)
        self.t1[key] = value
        return evicted

    def delete(self, key):
        for resident in (self.t1, self.t2):
            if key in resident:
                del resident[key]
                return True
        self.b1.pop(key, None)
        self.b2.pop(key, None)
        return False

    def audit(self):
        c = self.capacity
        assert len(self) <= c
        assert len(self.t1) + len(self.b1) <= c
        assert len(self.t1) + len(self.t2) + len(self.b1) + len(self.b2) <= 2 * c
        assert 0.0 <= self.p <= float(c)
        keys = [set(d) for d in (self.t1, self.t2, self.b1, self.b2)]
        assert sum(len(s) for s in keys) == len(set().union(*keys)), \
            "a key appears in two lists"
        return True
