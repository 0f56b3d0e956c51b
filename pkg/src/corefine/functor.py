"""Functor expressions: parsing, printing and flattening into sorts.

The accepted grammar is::

    T ::= X | P T | B T | D T | M^(T) | S
    S ::= C | T + T | T x T | T^A
    C ::= N | A | M
    A ::= {s1,...,sn} | n

Maximal polynomial regions (constants, ``+``, ``x`` and ``^A``) are
collapsed into a single :class:`Poly` node whose non-polynomial subterms
become numbered slots.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from . import monoids
from .monoids import Monoid

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class FunctorSyntaxError(ValueError):
    """Malformed functor expression; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


# -- polynomial expressions ------------------------------------------------


@dataclass(frozen=True)
class Slot:
    index: int


@dataclass(frozen=True)
class Nat:
    """The countable constant set of natural numbers."""


@dataclass(frozen=True)
class FinSet:
    """A finite constant set, written ``{a,b}`` (names) or ``n`` (numeral)."""

    elements: tuple
    numeral: bool = False

    @property
    def size(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class Carrier:
    """The carrier of a monoid used as a constant set, e.g. ``R`` in ``R x R^(X)``."""

    monoid: Monoid


@dataclass(frozen=True)
class Sum:
    terms: tuple


@dataclass(frozen=True)
class Prod:
    factors: tuple


@dataclass(frozen=True)
class Exp:
    base: "PolyExpr"
    exponent: FinSet


PolyExpr = Union[Slot, Nat, Carrier, FinSet, Sum, Prod, Exp]


# -- functor terms ---------------------------------------------------------


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Pow:
    child: "FunctorTerm"


@dataclass(frozen=True)
class Bag:
    child: "FunctorTerm"


@dataclass(frozen=True)
class Dist:
    child: "FunctorTerm"


@dataclass(frozen=True)
class MonoidValued:
    monoid: Monoid
    child: "FunctorTerm"


@dataclass(frozen=True)
class Poly:
    expr: PolyExpr
    children: tuple


FunctorTerm = Union[Var, Pow, Bag, Dist, MonoidValued, Poly]
BASIC_UNARY = (Pow, Bag, Dist, MonoidValued)


# -- lexer -----------------------------------------------------------------

_PUNCT = {"(", ")", "{", "}", ",", "+", "^", "×", "*"}
_KEEP_WORDS = {"Word", "max", "or", "x"}
_FUNCTOR_LETTERS = set("PBDXNRZC")


@dataclass
class _Tok:
    kind: str  # 'word', 'num', 'punct', 'end'
    text: str
    col: int


def _lex(text: str, line: int) -> list:
    toks = []
    i, n = 0, len(text)
    depth = 0  # inside {...} names are plain identifiers
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        col = i + 1
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Tok("num", text[i:j], col))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if depth > 0 or word in _KEEP_WORDS:
                toks.append(_Tok("word", word, col))
            elif set(word) <= _FUNCTOR_LETTERS:
                # juxtaposed prefix letters, e.g. "DX" or "PX"
                for k, letter in enumerate(word):
                    toks.append(_Tok("word", letter, col + k))
            else:
                toks.append(_Tok("word", word, col))
            i = j
            continue
        if ch in _PUNCT:
            if ch == "{":
                depth += 1
            elif ch == "}":
                depth = max(0, depth - 1)
            toks.append(_Tok("punct", "x" if ch in "×*" else ch, col))
            i += 1
            continue
        raise FunctorSyntaxError(f"unexpected character {ch!r}", line, col)
    toks.append(_Tok("end", "", n + 1))
    return toks


# -- raw parse tree ----------------------------------------------------------
# The parser first builds a tree where polynomial operators may have arbitrary
# subterms; _collapse then turns maximal polynomial regions into Poly nodes.


@dataclass(frozen=True)
class _RApp:
    kind: type
    child: object
    monoid: Optional[Monoid] = None


@dataclass(frozen=True)
class _RPoly:
    op: str  # 'sum', 'prod', 'exp', 'const'
    parts: tuple = ()
    const: object = None


class _Parser:
    def __init__(self, text: str, line: int):
        self.line = line
        self.toks = _lex(text, line)
        self.pos = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Optional[_Tok] = None):
        tok = tok or self.tok
        raise FunctorSyntaxError(msg, self.line, tok.col)

    def is_punct(self, text: str) -> bool:
        return self.tok.kind == "punct" and self.tok.text == text

    def is_word(self, text: str) -> bool:
        return self.tok.kind == "word" and self.tok.text == text

    def expect_punct(self, text: str):
        if not self.is_punct(text):
            self.error(f"expected {text!r}, found {self.tok.text or 'end of line'!r}")
        self.pos += 1

    def parse(self):
        if self.tok.kind == "end":
            self.error("empty functor expression")
        term = self.sum()
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")
        return term

    def sum(self):
        terms = [self.prod()]
        while self.is_punct("+"):
            self.pos += 1
            terms.append(self.prod())
        return terms[0] if len(terms) == 1 else _RPoly("sum", tuple(terms))

    def prod(self):
        factors = [self.unary()]
        while self.is_punct("x") or self.is_word("x"):
            self.pos += 1
            factors.append(self.unary())
        return factors[0] if len(factors) == 1 else _RPoly("prod", tuple(factors))

    def unary(self):
        tok = self.tok
        if tok.kind == "word" and tok.text in ("P", "B", "D"):
            self.pos += 1
            kind = {"P": Pow, "B": Bag, "D": Dist}[tok.text]
            return _RApp(kind, self.unary())
        return self.postfix()

    def postfix(self):
        base = self.atom()
        while self.is_punct("^"):
            self.pos += 1
            base = _RPoly("exp", (base,), self.finite_set(allow_empty=False))
        return base

    def atom(self):
        tok = self.tok
        if tok.kind == "word" and tok.text == "X":
            self.pos += 1
            return Var()
        if tok.kind == "word" and tok.text in ("R", "Z", "C", "N"):
            nxt, nxt2 = self.peek(), self.peek(2)
            if nxt.kind == "punct" and nxt.text == "^" and nxt2.kind == "punct" and nxt2.text == "(":
                self.pos += 1
                return self.monoid_app(monoids.MONOIDS[tok.text])
            self.pos += 1
            if tok.text == "N":
                return _RPoly("const", const=Nat())
            # a bare monoid token names its carrier as a constant set
            return _RPoly("const", const=Carrier(monoids.MONOIDS[tok.text]))
        if self.is_punct("("):
            nxt, nxt2 = self.peek(), self.peek(2)
            if nxt.kind == "word" and nxt2.kind == "punct" and nxt2.text == ",":
                return self.monoid_pair()
            self.pos += 1
            inner = self.sum()
            self.expect_punct(")")
            return inner
        if tok.kind == "num" or self.is_punct("{"):
            return _RPoly("const", const=self.finite_set(allow_empty=True))
        if tok.kind == "end":
            self.error("unexpected end of functor expression")
        self.error(f"unexpected {tok.text!r}")

    def monoid_pair(self):
        start = self.tok
        self.expect_punct("(")
        carrier = self.tok.text
        self.pos += 1
        self.expect_punct(",")
        op_tok = self.tok
        if op_tok.kind == "punct" and op_tok.text == "+":
            op = "+"
        elif op_tok.kind == "word":
            op = op_tok.text
        else:
            self.error("expected a monoid operation")
        self.pos += 1
        self.expect_punct(")")
        monoid = monoids.PAIR_TOKENS.get((carrier, op))
        if monoid is None:
            self.error(f"unknown monoid ({carrier},{op})", start)
        if not (self.is_punct("^") and self.peek().kind == "punct" and self.peek().text == "("):
            return _RPoly("const", const=Carrier(monoid))
        return self.monoid_app(monoid)

    def monoid_app(self, monoid: Monoid):
        self.expect_punct("^")
        self.expect_punct("(")
        child = self.sum()
        self.expect_punct(")")
        return _RApp(MonoidValued, child, monoid)

    def finite_set(self, allow_empty: bool) -> FinSet:
        tok = self.tok
        if tok.kind == "num":
            self.pos += 1
            size = int(tok.text)
            if size == 0 and not allow_empty:
                self.error("empty exponent set", tok)
            return FinSet(tuple(range(size)), numeral=True)
        if not self.is_punct("{"):
            self.error("expected a finite set '{...}' or a numeral")
        self.pos += 1
        names = []
        while not self.is_punct("}"):
            name_tok = self.tok
            if name_tok.kind != "word" or not IDENT_RE.match(name_tok.text):
                self.error("expected an element name", name_tok)
            if name_tok.text in names:
                self.error(f"duplicate element {name_tok.text!r}", name_tok)
            names.append(name_tok.text)
            self.pos += 1
            if self.is_punct(","):
                self.pos += 1
                if self.is_punct("}"):
                    self.error("trailing comma in set")
            elif not self.is_punct("}"):
                self.error("expected ',' or '}'")
        self.pos += 1
        if not names and not allow_empty:
            self.error("empty exponent set", tok)
        return FinSet(tuple(names))


def _collapse(raw) -> FunctorTerm:
    if isinstance(raw, Var):
        return raw
    if isinstance(raw, _RApp):
        child = _collapse(raw.child)
        if raw.kind is MonoidValued:
            return MonoidValued(raw.monoid, child)
        return raw.kind(child)
    children: list = []

    def expr(node) -> PolyExpr:
        if isinstance(node, _RPoly):
            if node.op == "const":
                return node.const
            if node.op == "sum":
                return Sum(tuple(expr(p) for p in node.parts))
            if node.op == "prod":
                return Prod(tuple(expr(p) for p in node.parts))
            return Exp(expr(node.parts[0]), node.const)
        children.append(_collapse(node))
        return Slot(len(children) - 1)

    e = expr(raw)
    return Poly(e, tuple(children))


def parse_functor(text: str, line: int = 1) -> FunctorTerm:
    """Parse one line of functor syntax into a :data:`FunctorTerm`."""
    return _collapse(_Parser(text, line).parse())


# -- canonical printer -------------------------------------------------------


def _set_text(s: FinSet) -> str:
    if s.numeral:
        return str(s.size)
    return "{" + ",".join(s.elements) + "}"


def _monoid_prefix(m: Monoid) -> str:
    return m.token


# P, B and D take the rest of a postfix chain as argument, so P(X)^2 reads
# as P((X)^2); as the base of ^ they need parentheses
_PREC_SUM, _PREC_PROD, _PREC_PREFIX, _PREC_POSTFIX, _PREC_ATOM = 0, 1, 2, 3, 4


def _term_text(term: FunctorTerm) -> tuple:
    if isinstance(term, Var):
        return "X", _PREC_ATOM
    if isinstance(term, (Pow, Bag, Dist)):
        letter = {Pow: "P", Bag: "B", Dist: "D"}[type(term)]
        return f"{letter}({format_functor(term.child)})", _PREC_PREFIX
    if isinstance(term, MonoidValued):
        return f"{_monoid_prefix(term.monoid)}^({format_functor(term.child)})", _PREC_ATOM
    return _expr_text(term.expr, term.children)


def _expr_text(e: PolyExpr, children) -> tuple:
    if isinstance(e, Slot):
        return _term_text(children[e.index])
    if isinstance(e, Nat):
        return "N", _PREC_ATOM
    if isinstance(e, FinSet):
        return _set_text(e), _PREC_ATOM
    if isinstance(e, Carrier):
        return e.monoid.token, _PREC_ATOM
    if isinstance(e, Sum):
        # nested sums keep their grouping
        parts = [_wrap(_expr_text(t, children), _PREC_SUM + 1) for t in e.terms]
        return " + ".join(parts), _PREC_SUM
    if isinstance(e, Prod):
        parts = [_wrap(_expr_text(f, children), _PREC_PROD + 1) for f in e.factors]
        return " x ".join(parts), _PREC_PROD
    base = _wrap(_expr_text(e.base, children), _PREC_POSTFIX)
    return f"{base}^{_set_text(e.exponent)}", _PREC_POSTFIX


def _wrap(text_prec: tuple, min_prec: int) -> str:
    text, prec = text_prec
    return text if prec >= min_prec else f"({text})"


def format_functor(term: FunctorTerm) -> str:
    """Canonical text for ``term``; ``parse_functor`` inverts it."""
    return _term_text(term)[0]


# -- flattening into sorts ---------------------------------------------------


@dataclass
class Sort:
    """One sort of the flattened, multi-sorted signature.

    ``kind`` is one of ``pow``, ``bag``, ``dist``, ``monoid``, ``poly`` or
    ``product``.  For unary kinds ``children`` holds the single target sort;
    for ``poly`` it holds one target per slot of ``expr`` (``-1`` for slots
    absorbed into a product component).  ``product`` sorts keep their
    top-level factors in ``expr`` and the per-factor ``roles``: ``-1`` for
    factors in the residual polynomial component, otherwise the index of the
    component handling that factor.
    """

    kind: str
    children: tuple = ()
    monoid: Optional[Monoid] = None
    expr: Optional[PolyExpr] = None
    components: tuple = ()
    roles: tuple = ()

    def describe(self) -> str:
        if self.kind == "product":
            return "product[" + ", ".join(c.describe() for c in self.components) + "]"
        if self.kind == "poly":
            return f"poly->{list(self.children)}"
        if self.kind == "monoid":
            return f"{self.monoid.token}->{self.children[0]}"
        return f"{self.kind}->{self.children[0]}"


@dataclass
class SortedSignature:
    sorts: list = field(default_factory=list)

    def __len__(self):
        return len(self.sorts)

    def __getitem__(self, i) -> Sort:
        return self.sorts[i]

    def __iter__(self):
        return iter(self.sorts)


_UNARY_KIND = {Pow: "pow", Bag: "bag", Dist: "dist", MonoidValued: "monoid"}


def flatten(term: FunctorTerm, fuse: bool = False) -> SortedSignature:
    """Flatten ``term`` into sorts; sort 0 belongs to the root.

    With ``fuse`` a polynomial whose top level is a product absorbs the
    basic functors among its factors: the factors become components of a
    single ``product`` sort instead of separate sorts reached through
    intermediate states.
    """
    if isinstance(term, Var):
        raise ValueError("functor must be guarded: the bare argument X has no transition structure")
    sig = SortedSignature()

    def target(node) -> int:
        return 0 if isinstance(node, Var) else visit(node)

    def unary(node) -> Sort:
        kind = _UNARY_KIND[type(node)]
        monoid = node.monoid if kind == "monoid" else None
        return Sort(kind, (target(node.child),), monoid=monoid)

    def visit(node) -> int:
        idx = len(sig.sorts)
        sig.sorts.append(None)
        if isinstance(node, BASIC_UNARY):
            sig.sorts[idx] = unary(node)
        elif fuse and _fusable(node):
            sig.sorts[idx] = fused(node)
        else:
            sig.sorts[idx] = Sort("poly", tuple(target(c) for c in node.children), expr=node.expr)
        return idx

    def fused(node: Poly) -> Sort:
        factors = node.expr.factors
        residual = [f for f in factors if not _basic_slot(f, node)]
        comps, roles = [], []
        if residual:
            children = [-1] * len(node.children)
            comps.append(None)  # filled once the other targets are numbered
        for f in factors:
            if _basic_slot(f, node):
                roles.append(len(comps))
                comps.append(unary(node.children[f.index]))
            else:
                roles.append(-1)
        if residual:
            for f in residual:
                for slot in _slots(f):
                    children[slot] = target(node.children[slot])
            comps[0] = Sort("poly", tuple(children), expr=Prod(tuple(residual)))
        return Sort("product", expr=node.expr, components=tuple(comps), roles=tuple(roles))

    visit(term)
    return sig


def _basic_slot(f, node: Poly) -> bool:
    return isinstance(f, Slot) and isinstance(node.children[f.index], BASIC_UNARY)


def _fusable(node) -> bool:
    return (isinstance(node, Poly) and isinstance(node.expr, Prod)
            and any(_basic_slot(f, node) for f in node.expr.factors))


def _slots(e: PolyExpr):
    if isinstance(e, Slot):
        yield e.index
    elif isinstance(e, Sum):
        for t in e.terms:
            yield from _slots(t)
    elif isinstance(e, Prod):
        for f in e.factors:
            yield from _slots(f)
    elif isinstance(e, Exp):
        yield from _slots(e.base)
