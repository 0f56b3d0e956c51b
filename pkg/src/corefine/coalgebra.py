"""Coalgebra files: parsing, printing and the flat edge encoding.

A file starts with a functor expression; every further non-blank line
``name: t`` gives the successor structure of one state.  Lines starting with
``#`` are comments.

Values are kept as plain Python data following the functor term:

* ``X``: the index of a named state
* ``P T``: tuple of distinct values; ``B T``: tuple with repetitions
* ``D T`` and ``M^(T)``: tuple of ``(value, weight)`` pairs, unit weights dropped
* products and exponents: tuples; sums: ``(i, value)`` with 0-based ``i``
* constants: an ``int`` (for ``N`` and numeral sets), a name, or a monoid element
"""
from __future__ import annotations

import json
import math
import re
import warnings
from dataclasses import dataclass, field

from . import functor as fn
from .functor import (Var, Pow, Bag, Dist, MonoidValued, Poly, Slot, Nat, Carrier,
                      FinSet, Sum, Prod, Exp, FunctorSyntaxError)
from .monoids import ADD_REAL
from .interfaces import interface_for_sort

DIST_TOLERANCE = 1e-9


class CoalgebraSyntaxError(FunctorSyntaxError):
    """Malformed state definition; carries line and column like functor errors."""


@dataclass
class Coalgebra:
    term: object
    names: list = field(default_factory=list)
    values: list = field(default_factory=list)

    def __len__(self):
        return len(self.names)

    def index(self) -> dict:
        return {name: i for i, name in enumerate(self.names)}


# -- value lexer ----------------------------------------------------------------

_VALUE_TOKEN = re.compile(r"\s*(?:([{}(),:])|([^\s{}(),:]+))")


def _tokens(text: str, line: int, offset: int):
    toks, pos = [], 0
    while True:
        m = _VALUE_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise CoalgebraSyntaxError("unexpected character", line, offset + pos + 1)
            break
        start = m.start(1) if m.group(1) else m.start(2)
        toks.append((m.group(1) or m.group(2), offset + start + 1))
        pos = m.end()
    toks.append(("", offset + len(text) + 1))
    return toks


class _ValueParser:
    def __init__(self, toks, line, names):
        self.toks = toks
        self.pos = 0
        self.line = line
        self.names = names

    @property
    def tok(self):
        return self.toks[self.pos][0]

    def error(self, msg):
        raise CoalgebraSyntaxError(msg, self.line, self.toks[self.pos][1])

    def take(self):
        t = self.toks[self.pos][0]
        if t == "":
            self.error("unexpected end of line")
        self.pos += 1
        return t

    def expect(self, t):
        if self.tok != t:
            self.error(f"expected {t!r}, found {self.tok or 'end of line'!r}")
        self.pos += 1

    def seq(self, open_, close, item):
        self.expect(open_)
        out = []
        if self.tok == close:
            self.pos += 1
            return out
        while True:
            out.append(item())
            if self.tok == ",":
                self.pos += 1
                continue
            self.expect(close)
            return out

    def literal(self, parse):
        col = self.toks[self.pos][1]
        text = self.take()
        try:
            return parse(text)
        except ValueError as e:
            raise CoalgebraSyntaxError(str(e), self.line, col) from None

    # one method per term shape
    def term(self, t):
        if isinstance(t, Var):
            col = self.toks[self.pos][1]
            name = self.take()
            if name not in self.names:
                raise CoalgebraSyntaxError(f"undefined state {name!r}", self.line, col)
            return self.names[name]
        if isinstance(t, (Pow, Bag)):
            items = self.seq("{", "}", lambda: self.term(t.child))
            if isinstance(t, Pow):
                items = list(dict.fromkeys(items))
            return tuple(items)
        if isinstance(t, (Dist, MonoidValued)):
            m = ADD_REAL if isinstance(t, Dist) else t.monoid
            seen = {}

            def entry():
                col = self.toks[self.pos][1]
                key = self.term(t.child)
                self.expect(":")
                w = self.literal(m.parse)
                if key in seen:
                    raise CoalgebraSyntaxError("duplicate key in weighted map", self.line, col)
                seen[key] = w
                return key, w

            pairs = self.seq("{", "}", entry)
            if isinstance(t, Dist):
                total = math.fsum(w for _, w in pairs)
                if abs(total - 1.0) > DIST_TOLERANCE:
                    warnings.warn(f"line {self.line}: distribution sums to {total!r}, not 1")
            return tuple((k, w) for k, w in pairs if w != m.unit)
        return self.expr(t.expr, t.children)

    def expr(self, e, children):
        if isinstance(e, Slot):
            return self.term(children[e.index])
        if isinstance(e, Nat):
            return self.literal(_parse_nat_const)
        if isinstance(e, Carrier):
            return self.literal(e.monoid.parse)
        if isinstance(e, FinSet):
            col = self.toks[self.pos][1]
            text = self.take()
            if e.numeral:
                if not text.isdigit() or int(text) >= e.size:
                    raise CoalgebraSyntaxError(f"{text!r} is not an element of {e.size}", self.line, col)
                return int(text)
            if text not in e.elements:
                raise CoalgebraSyntaxError(f"{text!r} is not one of {{{','.join(e.elements)}}}",
                                           self.line, col)
            return text
        if isinstance(e, Prod):
            return self.fixed_tuple([(f, children) for f in e.factors])
        if isinstance(e, Sum):
            if self.tok != "inj":
                self.error("expected 'inj i t' for a sum")
            self.pos += 1
            col = self.toks[self.pos][1]
            text = self.take()
            if not text.isdigit() or not 1 <= int(text) <= len(e.terms):
                raise CoalgebraSyntaxError(f"injection index must be 1..{len(e.terms)}", self.line, col)
            i = int(text) - 1
            return (i, self.expr(e.terms[i], children))
        if isinstance(e, Exp):
            return self.exponent(e, children)
        raise TypeError(e)

    def fixed_tuple(self, shapes):
        self.expect("(")
        parts = []
        for k, (e, children) in enumerate(shapes):
            if k:
                self.expect(",")
            parts.append(self.expr(e, children))
        self.expect(")")
        return tuple(parts)

    def exponent(self, e, children):
        col = self.toks[self.pos][1]
        keys = [str(k) for k in e.exponent.elements]
        if self.tok == "(":
            # positional form, in the order of the exponent set
            return self.fixed_tuple([(e.base, children)] * len(keys))
        got = {}

        def entry():
            kcol = self.toks[self.pos][1]
            k = self.take()
            if k not in keys:
                raise CoalgebraSyntaxError(f"{k!r} is not in the exponent set", self.line, kcol)
            if k in got:
                raise CoalgebraSyntaxError(f"duplicate component {k!r}", self.line, kcol)
            self.expect(":")
            got[k] = self.expr(e.base, children)

        self.seq("{", "}", entry)
        missing = [k for k in keys if k not in got]
        if missing:
            raise CoalgebraSyntaxError(f"missing components {missing}", self.line, col)
        return tuple(got[k] for k in keys)


def _parse_nat_const(text):
    if not text.isdigit():
        raise ValueError(f"not a natural number: {text!r}")
    return int(text)


_DEF_RE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*:")


def parse_coalgebra(term, lines, first_line: int = 2) -> Coalgebra:
    """Parse state definitions ``name: t`` against ``term``."""
    defs, names = [], {}
    for k, raw in enumerate(lines):
        line_no = first_line + k
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        m = _DEF_RE.match(line)
        if not m:
            raise CoalgebraSyntaxError("expected 'name: value'", line_no, len(line) - len(line.lstrip()) + 1)
        name = m.group(1)
        if name in names:
            raise CoalgebraSyntaxError(f"duplicate definition of {name!r}", line_no, m.start(1) + 1)
        names[name] = len(defs)
        defs.append((line_no, line[m.end():], m.end()))
    values = []
    for line_no, body, offset in defs:
        p = _ValueParser(_tokens(body, line_no, offset), line_no, names)
        values.append(p.term(term))
        if p.tok != "":
            p.error(f"unexpected {p.tok!r} after value")
    return Coalgebra(term, list(names), values)


def read_coalgebra(text: str):
    """Parse a whole file; returns ``(term, coalgebra)``."""
    lines = text.splitlines()
    first = 0
    while first < len(lines) and (not lines[first].strip() or lines[first].lstrip().startswith("#")):
        first += 1
    if first == len(lines):
        raise FunctorSyntaxError("missing functor expression", 1, 1)
    term = fn.parse_functor(lines[first], line=first + 1)
    return term, parse_coalgebra(term, lines[first + 1:], first_line=first + 2)


# -- printing -----------------------------------------------------------------


def format_value(term, v, names) -> str:
    if isinstance(term, Var):
        return names[v]
    if isinstance(term, (Pow, Bag)):
        return "{" + ", ".join(format_value(term.child, x, names) for x in v) + "}"
    if isinstance(term, (Dist, MonoidValued)):
        m = ADD_REAL if isinstance(term, Dist) else term.monoid
        return "{" + ", ".join(f"{format_value(term.child, k, names)}: {m.format(w)}" for k, w in v) + "}"
    return _format_expr(term.expr, term.children, v, names)


def _format_expr(e, children, v, names) -> str:
    if isinstance(e, Slot):
        return format_value(children[e.index], v, names)
    if isinstance(e, Carrier):
        return e.monoid.format(v)
    if isinstance(e, (Nat, FinSet)):
        return str(v)
    if isinstance(e, Prod):
        return "(" + ", ".join(_format_expr(f, children, x, names) for f, x in zip(e.factors, v)) + ")"
    if isinstance(e, Sum):
        i, x = v
        return f"inj {i + 1} {_format_expr(e.terms[i], children, x, names)}"
    keys = e.exponent.elements
    if e.exponent.numeral:
        return "(" + ", ".join(_format_expr(e.base, children, x, names) for x in v) + ")"
    return "{" + ", ".join(f"{k}: {_format_expr(e.base, children, x, names)}" for k, x in zip(keys, v)) + "}"


def format_coalgebra(c: Coalgebra) -> str:
    lines = [fn.format_functor(c.term)]
    lines += [f"{name}: {format_value(c.term, v, c.names)}" for name, v in zip(c.names, c.values)]
    return "\n".join(lines) + "\n"


# -- flat encoding ------------------------------------------------------------


@dataclass
class EncodedCoalgebra:
    """States with sort and interned F1 id, plus labelled edges grouped by source.

    States ``0 .. n0-1`` are the named ones; the rest are intermediate states
    introduced for nested functor applications.
    """

    signature: object
    names: list
    sort: list
    f1: list
    f1_values: list
    out_start: list
    src: list
    label: list
    tgt: list
    interfaces: list

    @property
    def n(self) -> int:
        return len(self.sort)

    @property
    def n0(self) -> int:
        return len(self.names)

    @property
    def m(self) -> int:
        return len(self.tgt)

    def out_labels(self, x) -> list:
        return self.label[self.out_start[x]:self.out_start[x + 1]]

    def out_edges(self, x):
        return range(self.out_start[x], self.out_start[x + 1])

    def incoming(self):
        """CSR arrays ``(start, edges)`` of the edges into each state."""
        n = self.n
        count = [0] * (n + 1)
        for y in self.tgt:
            count[y + 1] += 1
        for i in range(n):
            count[i + 1] += count[i]
        pos = count[:-1]
        edges = [0] * len(self.tgt)
        for e, y in enumerate(self.tgt):
            edges[pos[y]] = e
            pos[y] += 1
        return count, edges


_STAR = "*"


def desort(c: Coalgebra, fuse: bool = True, group_as_monoid: bool = False) -> EncodedCoalgebra:
    """Encode ``c`` as labelled edges, adding one intermediate state per nested occurrence.

    ``fuse`` combines basic functors that are direct factors of a product
    into one product sort instead of giving them intermediate states.
    """
    sig = fn.flatten(c.term, fuse=fuse)
    n0 = len(c.names)
    sort = [0] * n0
    pending = list(c.values)
    f1_ids: dict = {}
    f1_values, f1 = [], []
    out_start, src, label, tgt = [0], [], [], []

    def target(child_sort, v):
        if child_sort == 0:
            return v
        sort.append(child_sort)
        pending.append(v)
        return len(sort) - 1

    def encode(s, v, emit):
        kind = s.kind
        if kind == "pow":
            for x in v:
                emit(1, target(s.children[0], x))
            return int(len(v) > 0)
        if kind == "bag":
            for x in v:
                emit(1, target(s.children[0], x))
            return len(v)
        if kind in ("dist", "monoid"):
            m = ADD_REAL if kind == "dist" else s.monoid
            for x, w in v:
                emit(w, target(s.children[0], x))
            return m.total(w for _, w in v)
        if kind == "poly":
            slots = []
            shape = _erase(s.expr, v, slots)
            for pos, (idx, x) in enumerate(slots, 1):
                emit(pos, target(s.children[idx], x))
            return (shape, len(slots))
        # fused product: route each top-level factor to its component
        residual = tuple(x for x, role in zip(v, s.roles) if role < 0)
        comp_values = {role: x for x, role in zip(v, s.roles) if role >= 0}
        out = []
        for ci, comp in enumerate(s.components):
            def tagged(a, y, ci=ci):
                emit((ci, a), y)
            if comp.kind == "poly":
                out.append(encode(comp, residual, tagged))
            else:
                out.append(encode(comp, comp_values[ci], tagged))
        return tuple(out)

    def emit(a, y):
        src.append(x)
        label.append(a)
        tgt.append(y)

    x = 0
    while x < len(pending):
        s_idx = sort[x]
        f = encode(sig[s_idx], pending[x], emit)
        key = (s_idx, f)
        fid = f1_ids.get(key)
        if fid is None:
            fid = f1_ids[key] = len(f1_values)
            f1_values.append(key)
        f1.append(fid)
        pending[x] = None
        out_start.append(len(tgt))
        x += 1

    ifaces = [interface_for_sort(s, group_as_monoid) for s in sig]
    return EncodedCoalgebra(sig, list(c.names), sort, f1, f1_values, out_start, src, label, tgt, ifaces)


def _erase(e, v, slots):
    """Replace slot values by a marker, collecting ``(slot index, value)`` in order."""
    if isinstance(e, Slot):
        slots.append((e.index, v))
        return _STAR
    if isinstance(e, (Nat, FinSet, Carrier)):
        return v
    if isinstance(e, Sum):
        i, x = v
        return (i, _erase(e.terms[i], x, slots))
    if isinstance(e, Prod):
        return tuple(_erase(f, x, slots) for f, x in zip(e.factors, v))
    return tuple(_erase(e.base, x, slots) for x in v)


# -- partitions ---------------------------------------------------------------


def partition_blocks(names, block_of) -> list:
    """Group ``names`` by block id; blocks ordered by least member name, members sorted."""
    groups: dict = {}
    for name, b in zip(names, block_of):
        groups.setdefault(b, []).append(name)
    return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])


def write_partition(names, block_of, as_json: bool = False) -> str:
    blocks = partition_blocks(names, block_of)
    if as_json:
        return json.dumps({name: i for i, g in enumerate(blocks) for name in g}, sort_keys=True) + "\n"
    return "".join(f"block {i}: {' '.join(g)}\n" for i, g in enumerate(blocks))
