"""Refinement interfaces for the basic functors and their combinators.

An interface knows how to compute, for one state, its weight with respect to a
block from the labels of the edges into that block (``init``), and how to
split such a weight along a subblock (``update``).  ``update(labels, w)``
returns ``(w_S, v, w_rest)``: the weight for the subblock ``S``, the
three-way observation ``v`` and the weight for the rest of the block.

Every shipped interface also obeys the zero-splitter law: with no labels,
the third component of ``update`` is the input weight unchanged.  The
refiner relies on this to carry weights of non-predecessors over for free.
"""
from __future__ import annotations

import operator

from .monoids import Monoid, ADD_INT, ADD_REAL
from .sumtree import SumTree


class Interface:
    runtime_factor = "1"

    def init(self, f1, labels):
        raise NotImplementedError

    def update(self, labels, w):
        raise NotImplementedError

    def observe_empty(self, w):
        """Middle component of ``update([], w)``, without consuming ``w``."""
        return self.update([], w)[1]

    def snapshot(self, w):
        """A plain, comparable copy of ``w`` for tests and debugging."""
        return w


class PowInterface(Interface):
    """Finite powerset: W = 2 x N, a flag for edges outside the block and a count."""

    name = "pow"

    def init(self, f1, labels):
        return (0, len(labels))

    def update(self, labels, w):
        r, n_c = w
        n_s = len(labels)
        n_rest = n_c - n_s if n_c > n_s else 0
        return (
            (int(r or n_rest > 0), n_s),
            (r, int(n_rest > 0), int(n_s > 0)),
            (int(r or n_s > 0), n_rest),
        )

    def observe_empty(self, w):
        return (w[0], int(w[1] > 0), 0)


class GroupInterface(Interface):
    """Monoid-valued functor over an abelian group: W = G x G."""

    name = "group"

    def __init__(self, monoid: Monoid):
        self.monoid = monoid
        g = monoid.grothendieck
        if monoid.is_group:
            self.zero, self.add, self.sub = monoid.unit, operator.add, operator.sub
            self.embed = None
        elif g is not None:
            self.zero, self.add, self.sub = g.zero, g.add, g.sub
            self.embed = g.embed
        else:
            raise ValueError(f"{monoid.name} is not a group and has no group of differences")

    def _sum(self, labels):
        if self.embed is not None:
            labels = [self.embed(a) for a in labels]
        if not labels:
            return self.zero
        s = labels[0]
        add = self.add
        for a in labels[1:]:
            s = add(s, a)
        return s

    def init(self, f1, labels):
        g = f1 if self.embed is None else self.embed(f1)
        return (self.zero, g)

    def update(self, labels, w):
        r, b = w
        s = self._sum(labels)
        rest = self.sub(b, s)
        return ((self.add(r, rest), s), (r, rest, s), (self.add(r, s), rest))

    def observe_empty(self, w):
        return (w[0], w[1], self.zero)


class MonoidInterface(Interface):
    """Monoid-valued functor over an arbitrary commutative monoid.

    W = M x B(M\\{0}): the sum of weights leaving the block, and the bag of
    weights into it as a SumTree.  ``update`` consumes the tree it is given.
    """

    name = "monoid"
    runtime_factor = "log min(|M|, m)"

    def __init__(self, monoid: Monoid):
        self.monoid = monoid

    def init(self, f1, labels):
        return (self.monoid.unit, SumTree.build(self.monoid, labels))

    def update(self, labels, w):
        r, c = w
        add = self.monoid.add
        if labels:
            for a in labels:
                c.delete_one(a)
            s_tree = SumTree.build(self.monoid, labels)
        else:
            s_tree = SumTree(self.monoid)
        rest, s = c.total(), s_tree.total()
        return ((add(r, rest), s_tree), (r, rest, s), (add(r, s), c))

    def observe_empty(self, w):
        return (w[0], w[1].total(), self.monoid.unit)

    def snapshot(self, w):
        return (w[0], tuple(w[1].items()))


class PolyInterface(Interface):
    """Polynomial functor: W is the operation symbol with one bit per argument.

    F1 values are ``(shape, arity)``; labels are 1-based argument positions.
    """

    name = "poly"
    runtime_factor = "rank"

    def init(self, f1, labels):
        shape, arity = f1
        if len(labels) != arity:
            raise ValueError(f"arity mismatch: {len(labels)} labels for an operation of arity {arity}")
        return (f1, (1,) * arity)

    def update(self, labels, w):
        sym, bits = w
        trits = list(bits)
        for i in labels:
            if not 1 <= i <= len(trits):
                raise ValueError(f"position {i} out of range for arity {len(trits)}")
            trits[i - 1] += 1
        return (
            (sym, tuple(int(t == 2) for t in trits)),
            (sym, tuple(trits)),
            (sym, tuple(int(t == 1) for t in trits)),
        )

    def observe_empty(self, w):
        return w


class ProductInterface(Interface):
    """Product of interfaces: labels are ``(component, label)`` pairs."""

    name = "product"

    def __init__(self, components):
        if not components:
            raise ValueError("a product needs at least one component")
        self.components = list(components)

    @property
    def runtime_factor(self):
        return "max(" + ", ".join(c.runtime_factor for c in self.components) + ")"

    def _split(self, labels):
        parts = [[] for _ in self.components]
        for tag, a in labels:
            if not 0 <= tag < len(parts):
                raise ValueError(f"label tag {tag} out of range")
            parts[tag].append(a)
        return parts

    def init(self, f1, labels):
        parts = self._split(labels)
        return tuple(c.init(f, p) for c, f, p in zip(self.components, f1, parts))

    def update(self, labels, w):
        parts = self._split(labels)
        out = [c.update(p, wi) for c, p, wi in zip(self.components, parts, w)]
        return tuple(o[0] for o in out), tuple(o[1] for o in out), tuple(o[2] for o in out)

    def observe_empty(self, w):
        return tuple(c.observe_empty(wi) for c, wi in zip(self.components, w))

    def snapshot(self, w):
        return tuple(c.snapshot(wi) for c, wi in zip(self.components, w))


class CoproductInterface(Interface):
    """Disjoint union of interfaces; F1, labels and weights carry a tag."""

    name = "coproduct"

    def __init__(self, components):
        if not components:
            raise ValueError("a coproduct needs at least one component")
        self.components = list(components)

    @property
    def runtime_factor(self):
        return "max(" + ", ".join(c.runtime_factor for c in self.components) + ")"

    def _strip(self, tag, labels):
        inner = []
        for t, a in labels:
            if t != tag:
                raise ValueError(f"label tagged {t} in a bag for component {tag}")
            inner.append(a)
        return inner

    def init(self, f1, labels):
        tag, f = f1
        return (tag, self.components[tag].init(f, self._strip(tag, labels)))

    def update(self, labels, w):
        tag, wi = w
        a, v, b = self.components[tag].update(self._strip(tag, labels), wi)
        return (tag, a), (tag, v), (tag, b)

    def observe_empty(self, w):
        return (w[0], self.components[w[0]].observe_empty(w[1]))

    def snapshot(self, w):
        return (w[0], self.components[w[0]].snapshot(w[1]))


def interface_for_sort(sort, group_as_monoid: bool = False) -> Interface:
    """Pick the interface for one sort of a flattened signature.

    With ``group_as_monoid`` cancellative monoids use the general monoid
    interface instead of their group.
    """
    kind = sort.kind
    if kind == "pow":
        return PowInterface()
    if kind == "bag":
        return GroupInterface(ADD_INT)
    if kind == "dist":
        return GroupInterface(ADD_REAL)
    if kind == "monoid":
        m = sort.monoid
        if m.cancellative and not group_as_monoid:
            return GroupInterface(m)
        return MonoidInterface(m)
    if kind == "poly":
        return PolyInterface()
    if kind == "product":
        return ProductInterface([interface_for_sort(c, group_as_monoid) for c in sort.components])
    raise ValueError(f"unknown sort kind {kind!r}")


def order_key(v):
    """Total-order key for observation values (complex numbers compare by (re, im))."""
    if isinstance(v, tuple):
        return tuple(order_key(x) for x in v)
    if isinstance(v, complex):
        return (v.real, v.imag)
    return v
