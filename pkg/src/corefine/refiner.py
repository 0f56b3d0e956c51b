"""The partition refinement loop.

Two partitions are kept: the fine partition ``P`` (a RefinablePartition over
all states) and the coarse partition ``Q``, stored as a compound id per
P-block.  A splitter ``S`` is a P-block taken from the queue; processing it
moves ``S`` out of its compound ``B`` and splits every P-block whose states
see ``S`` and ``B \\ S`` differently.

Weights are kept per compound: ``weights[B][x] = [w, k]`` where ``w`` is the
interface weight of state ``x`` for ``B`` and ``k`` the number of edges from
``x`` into ``B``.  Entries exist only for states with at least one such edge.
"""
from __future__ import annotations

import gc
import math
import time
from dataclasses import dataclass, field

from .partition import RefinablePartition


class InvariantViolation(RuntimeError):
    pass


@dataclass
class RunStats:
    n: int = 0
    n_prime: int = 0
    m: int = 0
    initial_blocks: int = 0
    final_blocks: int = 0
    final_blocks_sort0: int = 0
    splitters: int = 0
    update_calls: int = 0
    label_traffic: int = 0
    init_s: float = 0.0
    refine_s: float = 0.0
    block_counts: list = field(default_factory=list)

    def traffic_bound(self) -> int:
        """``m * (floor(log2 n') + 1)``, the Hopcroft budget for label traffic."""
        if self.n_prime == 0:
            return 0
        return self.m * (int(math.floor(math.log2(self.n_prime))) + 1)


class Refiner:
    """Refinement state for one encoded coalgebra.

    ``singleton_opt`` skips weight bookkeeping for compounds holding a single
    state; ``check`` turns on the (cheap) queue-size assertions.
    """

    def __init__(self, enc, singleton_opt: bool = True, check: bool = True, trace: bool = False):
        self.enc = enc
        self.singleton_opt = singleton_opt
        self.check = check
        self.trace = trace
        self.stats = RunStats(n=enc.n0, n_prime=enc.n, m=enc.m)
        start = time.perf_counter()
        self._initialize()
        self.stats.init_s = time.perf_counter() - start

    def _initialize(self):
        enc = self.enc
        n = enc.n
        self.in_start, self.in_edges = enc.incoming()
        self.P = P = RefinablePartition.from_keys(enc.f1)
        nb = len(P)
        self.compound = [0] * nb          # compound id per P-block
        self.c_blocks = [nb]              # P-blocks per compound
        self.c_size = [n]                 # states per compound
        self.queued = [False] * nb
        self.enq_bound = [0] * nb
        self.queue = []
        self.qhead = 0
        entries = {}
        if not (self.singleton_opt and n <= 1):
            ifaces, sort, f1v, f1 = enc.interfaces, enc.sort, enc.f1_values, enc.f1
            start, label = enc.out_start, enc.label
            for x in range(n):
                a, b = start[x], start[x + 1]
                if b > a:
                    entries[x] = [ifaces[sort[x]].init(f1v[f1[x]][1], label[a:b]), b - a]
        self.weights = {0: entries}
        self.stats.initial_blocks = nb
        self.stats.block_counts.append(nb)
        if nb > 1:
            largest = max(range(nb), key=P.size)
            for b in range(nb):
                if b != largest:
                    self._enqueue(b, n)

    def _enqueue(self, b, bound):
        if self.check and 2 * self.P.size(b) > bound:
            raise InvariantViolation(f"splitter of size {self.P.size(b)} exceeds half of {bound}")
        self.queued[b] = True
        self.enq_bound[b] = bound
        self.queue.append(b)

    def run(self):
        start = time.perf_counter()
        queue = self.queue
        # the loop allocates many small acyclic objects; collector passes only cost time
        paused = gc.isenabled()
        gc.disable()
        try:
            while self.qhead < len(queue):
                s = queue[self.qhead]
                self.qhead += 1
                self.queued[s] = False
                self.process_splitter(s)
                if self.qhead > 4096 and self.qhead * 2 > len(queue):
                    del queue[:self.qhead]
                    self.qhead = 0
        finally:
            if paused:
                gc.enable()
        self.stats.refine_s = time.perf_counter() - start
        self.stats.final_blocks = len(self.P)
        self.stats.final_blocks_sort0 = len({self.P.block[x] for x in range(self.enc.n0)})
        return self.P

    def process_splitter(self, s):
        P, enc = self.P, self.enc
        B = self.compound[s]
        if self.c_blocks[B] == 1:
            return  # S is its whole compound: nothing to learn
        self.stats.splitters += 1
        size_s = P.size(s)

        # 1. move S out of its compound
        sc = len(self.c_blocks)
        self.c_blocks.append(1)
        self.c_size.append(size_s)
        self.c_blocks[B] -= 1
        self.c_size[B] -= size_s
        self.compound[s] = sc

        # 2. collect labels of edges into S per predecessor
        src, label = enc.src, enc.label
        in_start, in_edges = self.in_start, self.in_edges
        preds: dict = {}
        elems = P.elems
        for i in range(P.begin[s], P.end[s]):
            y = elems[i]
            for j in range(in_start[y], in_start[y + 1]):
                e = in_edges[j]
                x = src[e]
                ls = preds.get(x)
                if ls is None:
                    preds[x] = [label[e]]
                else:
                    ls.append(label[e])
        if not preds:
            if self.singleton_opt and self.c_size[B] == 1:
                self.weights.pop(B, None)
            return

        # 3. update weights and collect observations
        keep_s = not (self.singleton_opt and size_s == 1)
        keep_rest = not (self.singleton_opt and self.c_size[B] == 1)
        wb = self.weights.get(B)
        if wb is None:
            raise InvariantViolation(f"no weights stored for compound {B}")
        ws = {} if keep_s else None
        ifaces, sort, block = enc.interfaces, enc.sort, P.block
        touched: dict = {}
        traffic = 0
        for x, ls in preds.items():
            ent = wb.get(x)
            if ent is None:
                raise InvariantViolation(f"missing weight for state {x} and compound {B}")
            iface = ifaces[sort[x]]
            d = block[x]
            t = touched.get(d)
            if t is None:
                # every state of d shares the observation of a non-predecessor
                t = touched[d] = (iface.observe_empty(ent[0]), {})
            w_s, v, w_rest = iface.update(ls, ent[0])
            k = len(ls)
            traffic += k
            if keep_s:
                ws[x] = [w_s, k]
            if keep_rest and ent[1] > k:
                ent[0] = w_rest
                ent[1] -= k
            else:
                del wb[x]
            if v != t[0]:
                g = t[1].get(v)
                if g is None:
                    t[1][v] = [x]
                else:
                    g.append(x)
        self.stats.update_calls += len(preds)
        self.stats.label_traffic += traffic
        if keep_s:
            self.weights[sc] = ws
        if not keep_rest:
            self.weights.pop(B, None)

        # 4. split touched blocks, 5. enqueue all pieces but a largest one
        for d, (_, groups) in touched.items():
            if not groups:
                continue
            pieces = [d]
            for xs in groups.values():
                for x in xs:
                    P.mark(x)
                nb = P.split_marked(d)
                if nb is not None:
                    pieces.append(nb)
            if len(pieces) == 1:
                continue
            c = self.compound[d]
            for nb in pieces[1:]:
                self.compound.append(c)
                self.queued.append(False)
                self.enq_bound.append(0)
            self.c_blocks[c] += len(pieces) - 1
            if self.queued[d]:
                bound = self.enq_bound[d]
                for nb in pieces[1:]:
                    self._enqueue(nb, bound)
            else:
                largest = max(pieces, key=P.size)
                bound = self.c_size[c]
                for nb in pieces:
                    if nb != largest:
                        self._enqueue(nb, bound)
        if self.trace:
            self.stats.block_counts.append(len(P))

    def block_of_states(self) -> list:
        return list(self.P.block)


def refine(enc, singleton_opt: bool = True, check: bool = True):
    """Run refinement on ``enc``; returns ``(block id per state, stats)``."""
    r = Refiner(enc, singleton_opt=singleton_opt, check=check)
    r.run()
    return r.block_of_states(), r.stats


def sort0_partition(enc, block_of) -> list:
    """Blocks of named states as sorted index lists, ordered by least member."""
    groups: dict = {}
    for x in range(enc.n0):
        groups.setdefault(block_of[x], []).append(x)
    return sorted(groups.values())
