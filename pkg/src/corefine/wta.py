"""Weighted tree automata: conversion to coalgebras, backward bisimulation,
random generation and grammar import.

A WTA over a monoid ``M`` has an output weight per state and transition
weights ``mu[(sigma, (x1, ..., xk), x)]``.  As a coalgebra each state ``x``
maps to its output and the finitely supported map
``sigma(x1, ..., xk) -> mu[(sigma, (x1, ..., xk), x)]``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from . import monoids as M
from .coalgebra import Coalgebra, desort
from .functor import parse_functor
from .refiner import refine


@dataclass
class WTA:
    monoid: M.Monoid
    states: list
    signature: dict                  # symbol -> arity
    output: list = None              # per state; defaults to the unit
    transitions: dict = field(default_factory=dict)  # (symbol, children, target) -> weight

    def __post_init__(self):
        if self.output is None:
            self.output = [self.monoid.unit] * len(self.states)

    @property
    def rank(self) -> int:
        used = {sym for sym, _, _ in self.transitions}
        return max((self.signature[s] for s in used), default=0)

    def add(self, symbol, children, target, weight):
        key = (symbol, tuple(children), target)
        m = self.monoid
        w = m.add(self.transitions[key], weight) if key in self.transitions else weight
        if w == m.unit:
            self.transitions.pop(key, None)
        else:
            self.transitions[key] = w


# -- signature functors ----------------------------------------------------------


class _SigmaCodec:
    """Text of the polynomial functor for a signature and its value encoding."""

    def __init__(self, signature: dict):
        by_arity: dict = {}
        for sym in signature:
            by_arity.setdefault(signature[sym], []).append(sym)
        self.arities = sorted(by_arity)
        self.group = {a: i for i, a in enumerate(self.arities)}
        parts = []
        for a in self.arities:
            syms = "{" + ",".join(by_arity[a]) + "}"
            parts.append(syms if a == 0 else f"{syms} x X^{a}")
        self.text = " + ".join(parts) if parts else "0"
        self.signature = signature

    def value(self, sym, children):
        a = self.signature[sym]
        inner = sym if a == 0 else (sym, tuple(children))
        return (self.group[a], inner) if len(self.arities) > 1 else inner


def wta_to_coalgebra(wta: WTA, with_output: bool = True) -> Coalgebra:
    """The coalgebra ``x -> (f(x), mu_bar(x))``; without output only ``mu_bar``."""
    codec = _SigmaCodec(wta.signature)
    tok = wta.monoid.token
    text = f"{tok}^({codec.text})"
    if with_output:
        text = f"{tok} x {text}"
    term = parse_functor(text)
    maps = [[] for _ in wta.states]
    for (sym, children, x), w in wta.transitions.items():
        maps[x].append((codec.value(sym, children), w))
    values = [tuple(m) for m in maps]
    if with_output:
        values = [(o, v) for o, v in zip(wta.output, values)]
    return Coalgebra(term, [str(s) for s in wta.states], values)


def minimize_wta(wta: WTA, singleton_opt: bool = True):
    """Coarsest backward bisimulation, as a block id per state, and run statistics.

    Backward bisimulation ignores outputs, so the output component is left out.
    """
    enc = desort(wta_to_coalgebra(wta, with_output=False))
    block_of, stats = refine(enc, singleton_opt=singleton_opt)
    return block_of[:enc.n0], stats


def _block_map(n, relation):
    """Block id per state for a partition (list of blocks) or a set of pairs."""
    relation = list(relation)
    if relation and isinstance(relation[0], (list, set, frozenset)) or not relation:
        block = [-1] * n
        for i, b in enumerate(relation):
            for x in b:
                if block[x] != -1:
                    raise ValueError(f"state {x} occurs in two blocks")
                block[x] = i
        if -1 in block:
            raise ValueError("relation is not reflexive: some state is in no block")
        return block
    pairs = set(map(tuple, relation))
    for x in range(n):
        if (x, x) not in pairs:
            raise ValueError("relation is not reflexive")
    for p, q in pairs:
        if (q, p) not in pairs:
            raise ValueError("relation is not symmetric")
    block = [-1] * n
    for x in range(n):
        if block[x] == -1:
            cls = [y for y in range(n) if (x, y) in pairs]
            for y in cls:
                for z in cls:
                    if (y, z) not in pairs:
                        raise ValueError("relation is not transitive")
                block[y] = x
    return block


def is_backward_bisimulation(wta: WTA, relation) -> bool:
    """Check the backward bisimulation equations by direct summation.

    ``relation`` is a list of blocks of state indices or a set of pairs.
    """
    n = len(wta.states)
    block = _block_map(n, relation)
    m = wta.monoid
    sums = [dict() for _ in range(n)]
    for (sym, children, x), w in wta.transitions.items():
        key = (sym, tuple(block[c] for c in children))
        s = sums[x]
        s[key] = m.add(s[key], w) if key in s else w
    norm = [{k: v for k, v in s.items() if v != m.unit} for s in sums]
    first = {}
    for x in range(n):
        y = first.setdefault(block[x], x)
        if norm[x] != norm[y]:
            return False
    return True


# -- random automata ------------------------------------------------------------


def weight_pool(monoid: M.Monoid, cap: int, rng) -> list:
    """At most ``cap`` distinct non-unit weights for ``monoid``."""
    tok = monoid.token
    if tok in ("(N,max)", "N"):
        return list(range(1, cap + 1))
    if tok == "(Z,max)":
        return list(range(-(cap // 2), cap - cap // 2))
    if tok == "Z":
        return [k for k in range(-(cap // 2), cap // 2 + 2) if k != 0][:cap]
    if tok == "R":
        return [k / 4 for k in range(1, cap + 1)]
    if tok == "C":
        return [complex(k % 7 + 1, k // 7) / 2 for k in range(cap)]
    if tok == "(Word,or)":
        pool = set()
        while len(pool) < cap:
            pool.add(int(rng.integers(1, 2**63)) << int(rng.integers(0, 2)))
        return sorted(pool)
    raise ValueError(f"no weight distribution for {monoid.name}")


def generate_random(n: int, t: int, sigma: int = 4, rank: int = 2, monoid=M.MAX_NAT,
                    cap: int = 50, seed: int = 0) -> WTA:
    """Random WTA with ``n`` states and exactly ``t`` incoming transitions per state.

    The signature has ``sigma`` symbols, all of arity ``rank``; weights come
    from at most ``cap`` distinct values.
    """
    if isinstance(monoid, str):
        monoid = M.BY_NAME[monoid]
    if n < 1 or t < 0 or sigma < 1 or rank < 0 or cap < 1:
        raise ValueError("n, sigma and cap must be positive, t and rank non-negative")
    if t > sigma * n ** rank:
        raise ValueError(f"at most {sigma * n ** rank} distinct transitions per state exist")
    rng = np.random.default_rng(seed)
    pool = weight_pool(monoid, cap, rng)
    symbols = [f"s{i}" for i in range(sigma)]
    wta = WTA(monoid, [f"x{i}" for i in range(n)], {s: rank for s in symbols})
    wta.output = [pool[i] for i in rng.integers(0, len(pool), size=n)]
    syms = rng.integers(0, sigma, size=(n, t))
    kids = rng.integers(0, n, size=(n, t, rank))
    ws = rng.integers(0, len(pool), size=(n, t))
    trans = wta.transitions
    for x in range(n):
        seen = set()
        row_s, row_k, row_w = syms[x].tolist(), kids[x].tolist(), ws[x].tolist()
        for j in range(t):
            key = (symbols[row_s[j]], tuple(row_k[j]), x)
            while key in seen:
                key = (symbols[int(rng.integers(0, sigma))],
                       tuple(int(c) for c in rng.integers(0, n, size=rank)), x)
            seen.add(key)
            trans[key] = pool[row_w[j]]
    return wta


# -- grammars -------------------------------------------------------------------

_RULE = re.compile(r"^\s*(\S+)\s*(?:->|→)\s*(\S+)(?:\s+(\S+))?\s+(\S+)\s*$")
_SYMBOL = re.compile(r"^(.+)_(\d+)$")


def mangle(name: str) -> str:
    """Turn a grammar symbol into an identifier; valid identifiers are kept."""
    out = "".join(c if c.isalnum() and c.isascii() or c == "_" else f"_{ord(c):x}_" for c in name)
    return out if out and not out[0].isdigit() else "_" + out


def parse_berkeley(text: str) -> Coalgebra:
    """Read ``S_i -> T_j R_k w`` and ``S_i -> T_j w`` rules as an R^(Sigma X) coalgebra.

    Each base symbol ``S`` heading a rule contributes the operation symbols
    ``S/1`` and ``S/2`` (named ``S__1`` and ``S__2``).
    """
    states: dict = {}
    rules = []
    seen = set()

    def state(tok, line_no):
        if not _SYMBOL.match(tok):
            raise ValueError(f"line {line_no}: symbol {tok!r} is not of the form Name_index")
        name = mangle(tok)
        return states.setdefault(name, len(states))

    for line_no, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        m = _RULE.match(line)
        if not m:
            raise ValueError(f"line {line_no}: malformed rule {line.strip()!r}")
        head, c1, c2, wtext = m.groups()
        try:
            w = float(wtext)
        except ValueError:
            raise ValueError(f"line {line_no}: weight {wtext!r} is not a number") from None
        if not 0.0 <= w <= 1.0:
            raise ValueError(f"line {line_no}: weight {w} outside [0, 1]")
        base = mangle(_SYMBOL.match(head).group(1)) if _SYMBOL.match(head) else None
        x = state(head, line_no)
        kids = tuple(state(c, line_no) for c in (c1, c2) if c is not None)
        key = (x, len(kids), kids)
        if key in seen:
            raise ValueError(f"line {line_no}: duplicate rule for {head}")
        seen.add(key)
        rules.append((x, base, kids, w))

    names = list(states)
    signature = {}
    for _, base, kids, _ in rules:
        signature[f"{base}__1"] = 1
        signature[f"{base}__2"] = 2
    wta = WTA(M.ADD_REAL, names, signature)
    for x, base, kids, w in rules:
        if w != 0.0:
            wta.transitions[(f"{base}__{len(kids)}", kids, x)] = w
    return wta_to_coalgebra(wta, with_output=False)
