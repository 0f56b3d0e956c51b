"""Weight-balanced search tree over a multiset of monoid elements.

Each node stores a distinct element with its multiplicity and the monoid sum
of its whole subtree, so the sum of the multiset is read off the root.
Balancing follows Adams' weight-balanced trees with parameters (3, 2).
"""
from __future__ import annotations

import math

DELTA = 3
RATIO = 2


class _Node:
    __slots__ = ("value", "key", "mult", "sum", "size", "left", "right")

    def __init__(self, value, key, mult=1):
        self.value = value
        self.key = key
        self.mult = mult
        self.sum = None
        self.size = 1
        self.left = None
        self.right = None


def _size(t):
    return t.size if t is not None else 0


class SumTree:
    """Multiset of non-unit monoid elements with cached subtree sums."""

    __slots__ = ("monoid", "root", "count")

    def __init__(self, monoid, items=()):
        self.monoid = monoid
        self.root = None
        self.count = 0
        for x in items:
            self.insert(x)

    @classmethod
    def build(cls, monoid, values):
        """Build a perfectly balanced tree from an unordered bag in one pass."""
        tree = cls(monoid)
        counts = {}
        for v in values:
            if v == monoid.unit:
                raise ValueError("the monoid unit cannot be stored in a SumTree")
            counts[v] = counts.get(v, 0) + 1
        nodes = sorted(((monoid.key(v), v, k) for v, k in counts.items()), key=lambda e: e[0])

        def make(lo, hi):
            if lo >= hi:
                return None
            mid = (lo + hi) // 2
            key, value, mult = nodes[mid]
            t = _Node(value, key, mult)
            t.left, t.right = make(lo, mid), make(mid + 1, hi)
            return tree._fix(t)

        tree.root = make(0, len(nodes))
        tree.count = sum(counts.values())
        return tree

    # -- queries ----------------------------------------------------------

    def total(self):
        return self.root.sum if self.root is not None else self.monoid.unit

    def __len__(self):
        return self.count

    def node_count(self) -> int:
        return _size(self.root)

    def __bool__(self):
        return self.root is not None

    def items(self):
        """In-order ``(value, multiplicity)`` pairs."""
        out, stack, t = [], [], self.root
        while stack or t is not None:
            while t is not None:
                stack.append(t)
                t = t.left
            t = stack.pop()
            out.append((t.value, t.mult))
            t = t.right
        return out

    def elements(self) -> list:
        return [v for v, k in self.items() for _ in range(k)]

    def multiplicity(self, value) -> int:
        key, t = self.monoid.key(value), self.root
        while t is not None:
            if key < t.key:
                t = t.left
            elif t.key < key:
                t = t.right
            else:
                return t.mult
        return 0

    def height(self) -> int:
        def h(t):
            return 0 if t is None else 1 + max(h(t.left), h(t.right))
        return h(self.root)

    # -- updates ----------------------------------------------------------

    def insert(self, value):
        if value == self.monoid.unit:
            raise ValueError("the monoid unit cannot be stored in a SumTree")
        self.root = self._insert(self.root, value, self.monoid.key(value))
        self.count += 1

    def delete_one(self, value):
        key = self.monoid.key(value)
        self.root = self._delete(self.root, key, value)
        self.count -= 1

    def subtract_bag(self, values):
        for v in values:
            self.delete_one(v)

    # -- internals ----------------------------------------------------------

    def _fix(self, t):
        m = self.monoid
        s = m.scale(t.value, t.mult)
        if t.left is not None:
            s = m.add(t.left.sum, s)
        if t.right is not None:
            s = m.add(s, t.right.sum)
        t.sum = s
        t.size = 1 + _size(t.left) + _size(t.right)
        return t

    def _insert(self, t, value, key):
        if t is None:
            return self._fix(_Node(value, key))
        if key < t.key:
            t.left = self._insert(t.left, value, key)
        elif t.key < key:
            t.right = self._insert(t.right, value, key)
        else:
            t.mult += 1
            return self._fix(t)
        return self._balance(t)

    def _delete(self, t, key, value):
        if t is None:
            raise KeyError(f"{value!r} is not in the tree")
        if key < t.key:
            t.left = self._delete(t.left, key, value)
        elif t.key < key:
            t.right = self._delete(t.right, key, value)
        elif t.mult > 1:
            t.mult -= 1
            return self._fix(t)
        else:
            if t.left is None:
                return t.right
            if t.right is None:
                return t.left
            low, rest = self._pop_min(t.right)
            low.left, low.right = t.left, rest
            return self._balance(low)
        return self._balance(t)

    def _pop_min(self, t):
        if t.left is None:
            return t, t.right
        low, t.left = self._pop_min(t.left)
        return low, self._balance(t)

    def _rotate_left(self, t):
        r = t.right
        t.right, r.left = r.left, t
        self._fix(t)
        return self._fix(r)

    def _rotate_right(self, t):
        l = t.left
        t.left, l.right = l.right, t
        self._fix(t)
        return self._fix(l)

    def _balance(self, t):
        ln, rn = _size(t.left), _size(t.right)
        if ln + rn > 1:
            if rn > DELTA * ln:
                r = t.right
                if _size(r.left) >= RATIO * _size(r.right):
                    t.right = self._rotate_right(r)
                return self._rotate_left(t)
            if ln > DELTA * rn:
                l = t.left
                if _size(l.right) >= RATIO * _size(l.left):
                    t.left = self._rotate_left(l)
                return self._rotate_right(t)
        return self._fix(t)

    # -- debugging ----------------------------------------------------------

    def validate(self):
        """Check order, multiplicities, sizes, balance and every cached sum."""
        m = self.monoid

        def walk(t, lo, hi):
            if t is None:
                return 0, m.unit, 0
            assert t.mult >= 1
            assert lo is None or lo < t.key
            assert hi is None or t.key < hi
            ln, ls, lc = walk(t.left, lo, t.key)
            rn, rs, rc = walk(t.right, t.key, hi)
            expected = m.add(m.add(ls, m.total([t.value] * t.mult)), rs)
            assert t.sum == expected, (t.sum, expected)
            assert t.size == 1 + ln + rn
            if ln + rn > 1:
                assert ln <= DELTA * rn and rn <= DELTA * ln, (ln, rn)
            return t.size, t.sum, lc + rc + t.mult

        _, _, count = walk(self.root, None, None)
        assert count == self.count


def height_bound(nodes: int) -> int:
    """Largest height a (3, 2) weight-balanced tree with ``nodes`` nodes can have."""
    if nodes == 0:
        return 0
    return int(math.log(nodes + 1) / math.log(4 / 3)) + 1
