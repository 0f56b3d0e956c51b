"""Commutative monoids usable as transition weights.

Each monoid knows its unit, its addition, how to parse and print literals,
and whether it is cancellative.  Cancellative monoids that are not already
groups carry a :class:`Grothendieck` group into which they embed.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import reduce
from typing import Any, Callable, Optional

WORD_BITS = 64
WORD_MASK = (1 << WORD_BITS) - 1

BOTTOM = -math.inf


class Grothendieck:
    """Group of formal differences ``(a_plus, a_minus)`` over a cancellative monoid.

    ``normalize`` maps a pair to the canonical representative of its
    congruence class; equality and ordering of group elements are those of
    the canonical pairs.
    """

    def __init__(self, monoid: "Monoid", normalize: Callable[[tuple], tuple]):
        self.monoid = monoid
        self.normalize = normalize
        self.zero = normalize((monoid.unit, monoid.unit))

    def embed(self, m):
        return self.normalize((m, self.monoid.unit))

    def add(self, a, b):
        plus = self.monoid.add
        return self.normalize((plus(a[0], b[0]), plus(a[1], b[1])))

    def neg(self, a):
        return (a[1], a[0])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def equivalent(self, a, b) -> bool:
        plus = self.monoid.add
        return plus(a[0], b[1]) == plus(b[0], a[1])


@dataclass(frozen=True, eq=False)
class Monoid:
    """A commutative monoid ``(carrier, add, unit)``.

    ``scale(x, k)`` must equal ``x`` added to itself ``k`` times; idempotent
    monoids return ``x``.  ``is_group`` marks the built-in numeric groups
    whose Python ``+``/``-`` already implement the group operations.
    """

    token: str
    name: str
    unit: Any
    add: Callable[[Any, Any], Any]
    scale: Callable[[Any, int], Any]
    parse: Callable[[str], Any]
    format: Callable[[Any], str]
    cancellative: bool = False
    is_group: bool = False
    idempotent: bool = False
    sort_key: Optional[Callable[[Any], Any]] = None
    grothendieck: Optional[Grothendieck] = field(default=None, compare=False)

    def total(self, values) -> Any:
        return reduce(self.add, values, self.unit)

    def key(self, value):
        return value if self.sort_key is None else self.sort_key(value)

    def __repr__(self):
        return f"Monoid({self.token})"


# -- literal parsing -----------------------------------------------------

_INT_RE = re.compile(r"[+-]?\d+\Z")


def _parse_int(text: str) -> int:
    if not _INT_RE.match(text):
        raise ValueError(f"not an integer literal: {text!r}")
    return int(text)


def _parse_nat(text: str) -> int:
    value = _parse_int(text)
    if value < 0:
        raise ValueError(f"negative value {text!r} for a natural-number monoid")
    return value


def _parse_maxint(text: str):
    if text in ("-inf", "bottom"):
        return BOTTOM
    return _parse_int(text)


def _format_maxint(x) -> str:
    return "-inf" if x == BOTTOM else str(x)


def _parse_real(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ValueError(f"not a real literal: {text!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"non-finite real literal: {text!r}")
    return value


_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_REAL_ONLY = re.compile(rf"[+-]?{_NUM}\Z")
_IMAG_ONLY = re.compile(rf"(?P<im>[+-]?(?:{_NUM})?)i\Z")
_BOTH = re.compile(rf"(?P<re>[+-]?{_NUM})(?P<im>[+-](?:{_NUM})?)i\Z")


def _imag(text: str) -> float:
    if text in ("", "+"):
        return 1.0
    if text == "-":
        return -1.0
    return float(text)


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` style literals; either part may be omitted."""
    text = text.strip()
    if _REAL_ONLY.match(text):
        return complex(float(text), 0.0)
    m = _IMAG_ONLY.match(text)
    if m:
        return complex(0.0, _imag(m.group("im")))
    m = _BOTH.match(text)
    if m:
        return complex(float(m.group("re")), _imag(m.group("im")))
    raise ValueError(f"not a complex literal: {text!r}")


def format_complex(z: complex) -> str:
    re_part, im_part = _fmt_float(z.real), _fmt_float(abs(z.imag))
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{re_part}{sign}{im_part}i"


def _fmt_float(x: float) -> str:
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def _parse_word(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise ValueError(f"not a word literal: {text!r}") from None
    if not 0 <= value <= WORD_MASK:
        raise ValueError(f"word literal {text!r} does not fit in {WORD_BITS} bits")
    return value


def _complex_key(z: complex):
    return (z.real, z.imag)


def _times(x, k):
    return x * k


def _idem(x, k):
    return x


def _max(a, b):
    return a if a >= b else b


def _or(a, b):
    return a | b


def _add(a, b):
    return a + b


# -- the shipped monoids ---------------------------------------------------

ADD_INT = Monoid("Z", "(Z,+,0)", 0, _add, _times, _parse_int, str,
                 cancellative=True, is_group=True)
ADD_REAL = Monoid("R", "(R,+,0)", 0.0, _add, _times, _parse_real, _fmt_float,
                  cancellative=True, is_group=True)
ADD_COMPLEX = Monoid("C", "(C,+,0)", 0j, _add, _times, parse_complex, format_complex,
                     cancellative=True, is_group=True, sort_key=_complex_key)
WORD_OR = Monoid("(Word,or)", "(P(64),or,0)", 0, _or, _idem, _parse_word, str,
                 idempotent=True)
MAX_NAT = Monoid("(N,max)", "(N,max,0)", 0, _max, _idem, _parse_nat, str,
                 idempotent=True)
MAX_INT = Monoid("(Z,max)", "(Z u {bottom},max,bottom)", BOTTOM, _max, _idem, _parse_maxint, _format_maxint,
                 idempotent=True)


def _nat_normalize(pair):
    a, b = pair
    m = a if a < b else b
    return (a - m, b - m)


# (N,+,0) is the extension example: cancellative but not a group.
ADD_NAT = Monoid("N", "(N,+,0)", 0, _add, _times, _parse_nat, str, cancellative=True)
object.__setattr__(ADD_NAT, "grothendieck", Grothendieck(ADD_NAT, _nat_normalize))

MONOIDS = {m.token: m for m in (ADD_INT, ADD_REAL, ADD_COMPLEX, WORD_OR, MAX_NAT, MAX_INT, ADD_NAT)}

# Accepted spellings of the parenthesized form "(carrier,op)".
PAIR_TOKENS = {
    ("Z", "+"): ADD_INT,
    ("R", "+"): ADD_REAL,
    ("C", "+"): ADD_COMPLEX,
    ("N", "+"): ADD_NAT,
    ("Word", "or"): WORD_OR,
    ("N", "max"): MAX_NAT,
    ("Z", "max"): MAX_INT,
}

# Names accepted by the WTA generator and the CLI.
BY_NAME = {
    "int": ADD_INT,
    "real": ADD_REAL,
    "complex": ADD_COMPLEX,
    "word": WORD_OR,
    "maxnat": MAX_NAT,
    "maxint": MAX_INT,
    "nat": ADD_NAT,
}


def grothendieck_embed(monoid: Monoid) -> Grothendieck:
    """Return the group of differences for a cancellative ``monoid``."""
    if not monoid.cancellative:
        raise ValueError(f"{monoid.name} is not cancellative")
    if monoid.grothendieck is None:
        raise ValueError(f"{monoid.name} has no canonical form for its difference pairs")
    return monoid.grothendieck
