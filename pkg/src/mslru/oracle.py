"""Slow reference models for differential testing.

Nothing here shares code or data layout with the production paths: LRU is
modelled by timestamp scan instead of a recency list, the set model keeps
plain Python lists and spells the movement rules longhand. Tests drive a
production implementation and its oracle with the same operation sequence
and require exact agreement on every result and on the final contents.
Only tests import this module.
"""

_ABSENT = object()


class OracleLru:
    """Exact LRU by last-touch timestamps; the victim is a linear scan."""

    def __init__(self, capacity):
        assert capacity >= 1
        self.capacity = capacity
        self._clock = 0
        self._items = {}  # key -> [value, last touch]

    def __len__(self):
        return len(self._items)

    def _touch(self, entry):
        self._clock += 1
        entry[1] = self._clock

    def get(self, key):
        entry = self._items.get(key)
        if entry is None:
            return False, None
        self._touch(entry)
        return True, entry[0]

    def put(self, key, value):
        entry = self._items.get(key)
        if entry is not None:
            entry[0] = value
            self._touch(entry)
            return None
        self._clock += 1
        self._items[key] = [value, self._clock]
        if len(self._items) <= self.capacity:
            return None
        victim = min(self._items, key=lambda k: self._items[k][1])
        del self._items[victim]
        return victim

    def delete(self, key):
        return self._items.pop(key, _ABSENT) is not _ABSENT

    def keys_by_recency(self):
        """Keys most recent first."""
        return sorted(self._items, key=lambda k: -self._items[k][1])


class OracleMultistepSet:
    """One set as M plain lists, most recent first inside each list.

    Empty lanes are implicit: a list shorter than P simply has fewer
    entries, and appending to a short list lands in its first free lane.
    """

    def __init__(self, m, p):
        assert m >= 1 and p >= 1
        self.m = m
        self.p = p
        self.vectors = [[] for _ in range(m)]  # entries are [key, value]

    def __len__(self):
        return sum(len(v) for v in self.vectors)

    def _find(self, key):
        for vi, vec in enumerate(self.vectors):
            for j, entry in enumerate(vec):
                if entry[0] == key:
                    return vi, j
        return None

    def _move_after_hit(self, vi, j):
        vec = self.vectors[vi]
        if j > 0:
            vec.insert(0, vec.pop(j))
        elif vi > 0:
            item = vec.pop(0)
            higher = self.vectors[vi - 1]
            if len(higher) == self.p:
                demoted = higher.pop()
                higher.append(item)
                vec.insert(0, demoted)
            else:
                higher.append(item)

    def get(self, key):
        loc = self._find(key)
        if loc is None:
            return False, None, None
        vi, j = loc
        value = self.vectors[vi][j][1]
        self._move_after_hit(vi, j)
        return True, value, vi + 1

    def put(self, key, value):
        loc = self._find(key)
        if loc is not None:
            vi, j = loc
            self.vectors[vi][j][1] = value
            self._move_after_hit(vi, j)
            return None
        for vi in range(self.m - 1, -1, -1):
            if len(self.vectors[vi]) < self.p:
                self.vectors[vi].insert(0, [key, value])
                return None
        victim = self.vectors[self.m - 1].pop()
        self.vectors[self.m - 1].insert(0, [key, value])
        return victim[0]

    def delete(self, key):
        loc = self._find(key)
        if loc is None:
            return False
        vi, j = loc
        self.vectors[vi].pop(j)
        return True

    def rows(self):
        """Layout as nested lists padded with None, comparable to the
        vectorized set's view."""
        return [[entry[0] for entry in vec] + [None] * (self.p - len(vec))
                for vec in self.vectors]
