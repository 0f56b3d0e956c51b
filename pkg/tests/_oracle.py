"""Brute-force weight maps for the interface axiom tests.

Each bundle here describes one basic functor on a small state set: how to
draw a random ``t`` in ``FX``, which labels point into a set of states, and
the specification-level values ``w(B)(t)`` and ``F chi_S^B (t)`` computed
straight from ``t``.
"""
import random
from collections import Counter

from corefine import interfaces as I
from corefine import monoids as M
from corefine.sumtree import SumTree

X = range(6)


def _msum(m, values):
    s = m.unit
    for v in values:
        s = m.add(s, v)
    return s


class PowOracle:
    name = "pow"

    def __init__(self):
        self.iface = I.PowInterface()

    def draw(self, rng):
        return frozenset(y for y in X if rng.random() < 0.4)

    def f1(self, t):
        return int(bool(t))

    def labels(self, t, S):
        return [1 for y in t if y in S]

    def weight(self, B, t):
        return (int(any(y not in B for y in t)), sum(1 for y in t if y in B))

    def make(self, B, t):
        return self.weight(B, t)

    def f3(self, S, B, t):
        return (int(any(y not in B for y in t)),
                int(any(y in B and y not in S for y in t)),
                int(any(y in S for y in t)))


class GroupOracle:
    def __init__(self, monoid, pool):
        self.m = monoid
        self.pool = pool
        self.iface = I.GroupInterface(monoid)
        self.name = f"group {monoid.token}"

    def draw(self, rng):
        return {y: rng.choice(self.pool) for y in X if rng.random() < 0.5}

    def f1(self, t):
        return _msum(self.m, t.values())

    def labels(self, t, S):
        return [w for y, w in t.items() if y in S]

    def weight(self, B, t):
        m = self.m
        return (_msum(m, (w for y, w in t.items() if y not in B)),
                _msum(m, (w for y, w in t.items() if y in B)))

    def make(self, B, t):
        return self.weight(B, t)

    def f3(self, S, B, t):
        m = self.m
        return (_msum(m, (w for y, w in t.items() if y not in B)),
                _msum(m, (w for y, w in t.items() if y in B and y not in S)),
                _msum(m, (w for y, w in t.items() if y in S)))


class BagOracle(GroupOracle):
    """Bags as N-valued maps, labelled by multiplicity."""

    def __init__(self):
        super().__init__(M.ADD_INT, [1, 2, 3])
        self.name = "bag"

    def draw(self, rng):
        return dict(Counter(rng.choice(X) for _ in range(rng.randint(0, 6))))


class GrothendieckOracle(GroupOracle):
    """(N,+) through its group of differences: weights are canonical pairs."""

    def __init__(self):
        super().__init__(M.ADD_NAT, [1, 2, 3])
        self.g = M.ADD_NAT.grothendieck
        self.name = "group N (differences)"

    def weight(self, B, t):
        r, b = super().weight(B, t)
        return (self.g.embed(r), self.g.embed(b))

    def f3(self, S, B, t):
        return tuple(self.g.embed(v) for v in super().f3(S, B, t))


class MonoidOracle:
    def __init__(self, monoid, pool):
        self.m = monoid
        self.pool = pool
        self.iface = I.MonoidInterface(monoid)
        self.name = f"monoid {monoid.token}"

    def draw(self, rng):
        return {y: rng.choice(self.pool) for y in X if rng.random() < 0.5}

    def f1(self, t):
        return _msum(self.m, t.values())

    def labels(self, t, S):
        return [w for y, w in t.items() if y in S]

    def weight(self, B, t):
        bag = Counter(w for y, w in t.items() if y in B)
        items = tuple(sorted(bag.items(), key=lambda e: self.m.key(e[0])))
        return (_msum(self.m, (w for y, w in t.items() if y not in B)), items)

    def make(self, B, t):
        return (_msum(self.m, (w for y, w in t.items() if y not in B)),
                SumTree.build(self.m, [w for y, w in t.items() if y in B]))

    def f3(self, S, B, t):
        m = self.m
        return (_msum(m, (w for y, w in t.items() if y not in B)),
                _msum(m, (w for y, w in t.items() if y in B and y not in S)),
                _msum(m, (w for y, w in t.items() if y in S)))


class PolyOracle:
    """Terms sigma(x_1, ..., x_k) over a few symbols of arity 0..3."""

    name = "poly"
    SYMBOLS = {"c": 0, "u": 1, "f": 2, "g": 2, "h": 3}

    def __init__(self):
        self.iface = I.PolyInterface()

    def draw(self, rng):
        sym = rng.choice(sorted(self.SYMBOLS))
        return (sym, tuple(rng.choice(X) for _ in range(self.SYMBOLS[sym])))

    def f1(self, t):
        return (t[0], len(t[1]))

    def labels(self, t, S):
        return [i + 1 for i, y in enumerate(t[1]) if y in S]

    def weight(self, B, t):
        return (self.f1(t), tuple(int(y in B) for y in t[1]))

    def make(self, B, t):
        return self.weight(B, t)

    def f3(self, S, B, t):
        return (self.f1(t), tuple(2 if y in S else 1 if y in B else 0 for y in t[1]))


class ProductOracle:
    def __init__(self, parts):
        self.parts = parts
        self.iface = I.ProductInterface([p.iface for p in parts])
        self.name = "product(" + ", ".join(p.name for p in parts) + ")"

    def draw(self, rng):
        return tuple(p.draw(rng) for p in self.parts)

    def f1(self, t):
        return tuple(p.f1(ti) for p, ti in zip(self.parts, t))

    def labels(self, t, S):
        return [(i, a) for i, (p, ti) in enumerate(zip(self.parts, t)) for a in p.labels(ti, S)]

    def weight(self, B, t):
        return tuple(p.weight(B, ti) for p, ti in zip(self.parts, t))

    def make(self, B, t):
        return tuple(p.make(B, ti) for p, ti in zip(self.parts, t))

    def f3(self, S, B, t):
        return tuple(p.f3(S, B, ti) for p, ti in zip(self.parts, t))


class CoproductOracle:
    def __init__(self, parts):
        self.parts = parts
        self.iface = I.CoproductInterface([p.iface for p in parts])
        self.name = "coproduct(" + ", ".join(p.name for p in parts) + ")"

    def draw(self, rng):
        i = rng.randrange(len(self.parts))
        return (i, self.parts[i].draw(rng))

    def f1(self, t):
        return (t[0], self.parts[t[0]].f1(t[1]))

    def labels(self, t, S):
        return [(t[0], a) for a in self.parts[t[0]].labels(t[1], S)]

    def weight(self, B, t):
        return (t[0], self.parts[t[0]].weight(B, t[1]))

    def make(self, B, t):
        return (t[0], self.parts[t[0]].make(B, t[1]))

    def f3(self, S, B, t):
        return (t[0], self.parts[t[0]].f3(S, B, t[1]))


def bundles():
    """One oracle per shipped interface, with exact (integer or dyadic) weights."""
    return [
        PowOracle(),
        BagOracle(),
        GroupOracle(M.ADD_INT, [-3, -1, 1, 2, 3]),
        GroupOracle(M.ADD_REAL, [-1.5, -0.25, 0.5, 1.0, 2.75]),
        GroupOracle(M.ADD_COMPLEX, [1 + 0j, 0.5j, -1 + 0.25j, 2 - 1j]),
        GrothendieckOracle(),
        MonoidOracle(M.MAX_NAT, [1, 2, 3, 5]),
        MonoidOracle(M.MAX_INT, [-2, 0, 1, 4]),
        MonoidOracle(M.WORD_OR, [1, 2, 4, 6, 9]),
        MonoidOracle(M.ADD_INT, [-2, -1, 1, 3]),
        PolyOracle(),
        ProductOracle([PowOracle(), GroupOracle(M.ADD_REAL, [0.5, -1.0, 2.0])]),
        ProductOracle([PolyOracle(), MonoidOracle(M.MAX_NAT, [1, 2, 3])]),
        CoproductOracle([GroupOracle(M.ADD_REAL, [0.25, 0.5]), PolyOracle(), PowOracle(), BagOracle()]),
    ]


def draw_sets(rng):
    """Random ``S`` within ``B`` within ``X``."""
    B = frozenset(y for y in X if rng.random() < 0.7)
    S = frozenset(y for y in B if rng.random() < 0.5)
    return S, B


def check_axioms(bundle, t, S, B):
    """Return a list of failed axiom names for one instance."""
    iface, bad = bundle.iface, []
    everything = frozenset(X)
    w0 = iface.init(bundle.f1(t), bundle.labels(t, everything))
    if iface.snapshot(w0) != bundle.weight(everything, t):
        bad.append("init")
    ws, v, wr = iface.update(bundle.labels(t, S), bundle.make(B, t))
    if iface.snapshot(ws) != bundle.weight(S, t):
        bad.append("update: w(S)")
    if v != bundle.f3(S, B, t):
        bad.append("update: F3")
    if iface.snapshot(wr) != bundle.weight(B - S, t):
        bad.append("update: w(B-S)")
    return bad


def draw_zero_splitter(bundle, rng):
    """An instance with no edges of ``t`` into ``S``."""
    while True:
        t = bundle.draw(rng)
        S, B = draw_sets(rng)
        if not bundle.labels(t, S):
            return t, S, B


def zero_splitter_holds(bundle, t, S, B) -> bool:
    iface = bundle.iface
    w = bundle.make(B, t)
    before = iface.snapshot(w)
    _, _, rest = iface.update([], w)
    return iface.snapshot(rest) == before


def rng_for(seed):
    return random.Random(seed)
