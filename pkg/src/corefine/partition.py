"""Refinable partition with constant-time marking (after Valmari and Lehtinen)."""
from __future__ import annotations


class RefinablePartition:
    """Partition of ``range(n)`` kept as a permutation array.

    Block ``b`` occupies ``elems[begin[b]:end[b]]``; its marked states sit at
    the front, in ``elems[begin[b]:mid[b]]``.
    """

    def __init__(self, n: int):
        self.elems = list(range(n))
        self.loc = list(range(n))
        self.block = [0] * n
        self.begin = [0] if n else []
        self.end = [n] if n else []
        self.mid = [0] if n else []

    @classmethod
    def from_keys(cls, keys) -> "RefinablePartition":
        """States with equal (hashable) keys share a block; blocks appear in first-seen key order."""
        keys = list(keys)
        groups: dict = {}
        for x, k in enumerate(keys):
            groups.setdefault(k, []).append(x)
        p = cls(0)
        p.elems = [x for g in groups.values() for x in g]
        p.loc = [0] * len(keys)
        p.block = [0] * len(keys)
        pos = 0
        for b, g in enumerate(groups.values()):
            p.begin.append(pos)
            p.mid.append(pos)
            for x in g:
                p.loc[x] = pos
                p.block[x] = b
                pos += 1
            p.end.append(pos)
        return p

    def __len__(self):
        return len(self.begin)

    @property
    def block_count(self) -> int:
        return len(self.begin)

    def size(self, b: int) -> int:
        return self.end[b] - self.begin[b]

    def marked_count(self, b: int) -> int:
        return self.mid[b] - self.begin[b]

    def block_of(self, x: int) -> int:
        return self.block[x]

    def states_of(self, b: int) -> list:
        return self.elems[self.begin[b]:self.end[b]]

    def is_marked(self, x: int) -> bool:
        b = self.block[x]
        return self.loc[x] < self.mid[b]

    def mark(self, x: int):
        b = self.block[x]
        i, m = self.loc[x], self.mid[b]
        if i < m:
            return  # already marked
        elems, loc = self.elems, self.loc
        y = elems[m]
        elems[m], elems[i] = x, y
        loc[x], loc[y] = m, i
        self.mid[b] = m + 1

    def split_marked(self, b: int):
        """Move the marked states of ``b`` into a new block and return its id.

        Returns ``None`` (and clears the marks) when no state or every state
        of ``b`` is marked.
        """
        first, m = self.begin[b], self.mid[b]
        if m == first:
            return None
        if m == self.end[b]:
            self.mid[b] = first
            return None
        nb = len(self.begin)
        self.begin.append(first)
        self.end.append(m)
        self.mid.append(first)
        self.begin[b] = m
        self.mid[b] = m
        block, elems = self.block, self.elems
        for i in range(first, m):
            block[elems[i]] = nb
        return nb

    def blocks(self) -> list:
        return [self.states_of(b) for b in range(len(self.begin))]

    def validate(self):
        n = len(self.elems)
        assert sorted(self.elems) == list(range(n))
        for i, x in enumerate(self.elems):
            assert self.loc[x] == i
        covered = 0
        for b in range(len(self.begin)):
            assert self.begin[b] <= self.mid[b] <= self.end[b]
            assert self.begin[b] < self.end[b]
            for i in range(self.begin[b], self.end[b]):
                assert self.block[self.elems[i]] == b
            covered += self.end[b] - self.begin[b]
        assert covered == n
