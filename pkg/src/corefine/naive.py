"""Reference fixpoint for behavioural equivalence, used as a test oracle.

Starting from the trivial partition, states are repeatedly regrouped by the
image of their successor structure under the current block assignment until
nothing changes.  Quadratic, but independent of the encoding machinery.
"""
from __future__ import annotations

from collections import Counter

from .functor import Var, Pow, Bag, Dist, MonoidValued, Slot, Nat, Carrier, FinSet, Sum, Prod
from .monoids import ADD_REAL


def observe(term, v, block):
    """``F(block)(v)``: the value with every state replaced by its block, canonically."""
    if isinstance(term, Var):
        return block[v]
    if isinstance(term, Pow):
        return frozenset(observe(term.child, x, block) for x in v)
    if isinstance(term, Bag):
        return frozenset(Counter(observe(term.child, x, block) for x in v).items())
    if isinstance(term, (Dist, MonoidValued)):
        m = ADD_REAL if isinstance(term, Dist) else term.monoid
        sums: dict = {}
        for x, w in v:
            k = observe(term.child, x, block)
            sums[k] = m.add(sums[k], w) if k in sums else w
        return frozenset((k, w) for k, w in sums.items() if w != m.unit)
    return _observe_expr(term.expr, term.children, v, block)


def _observe_expr(e, children, v, block):
    if isinstance(e, Slot):
        return observe(children[e.index], v, block)
    if isinstance(e, (Nat, FinSet, Carrier)):
        return v
    if isinstance(e, Sum):
        i, x = v
        return (i, _observe_expr(e.terms[i], children, x, block))
    if isinstance(e, Prod):
        return tuple(_observe_expr(f, children, x, block) for f, x in zip(e.factors, v))
    return tuple(_observe_expr(e.base, children, x, block) for x in v)


def naive_fixpoint(c) -> list:
    """Block id per state of the coalgebra ``c`` (ids in first-seen order)."""
    n = len(c.values)
    block = [0] * n
    count = 1 if n else 0
    while True:
        ids: dict = {}
        new = [ids.setdefault((block[x], observe(c.term, c.values[x], block)), len(ids))
               for x in range(n)]
        if len(ids) == count:
            return new
        block, count = new, len(ids)


def as_partition(block_of) -> list:
    groups: dict = {}
    for x, b in enumerate(block_of):
        groups.setdefault(b, []).append(x)
    return sorted(groups.values())
