import itertools
import random

import pytest

from corefine import monoids as M
from corefine.coalgebra import read_coalgebra, desort, format_coalgebra
from corefine.naive import naive_fixpoint, as_partition
from corefine.wta import (WTA, wta_to_coalgebra, minimize_wta, is_backward_bisimulation,
                          generate_random, parse_berkeley, mangle)

from _support import WTA_EXAMPLE, WEIGHTS


def example():
    w = WTA(M.MAX_INT, list("abcd"), {"p": 2})
    a, b, c, d = range(4)
    for kids, x, wt in [((b, a), a, 3), ((a, a), a, 5), ((a, b), b, 5), ((b, b), b, 2),
                        ((b, a), c, 5), ((c, a), c, 7), ((b, a), d, 5), ((a, c), d, 7)]:
        w.add("p", kids, x, wt)
    return w


def test_conversion_matches_listing():
    c = wta_to_coalgebra(example(), with_output=False)
    _, listing = read_coalgebra(WTA_EXAMPLE)
    # the listing spells pairs directly; ours wraps them in the symbol
    ours = [{kids: w for (_, kids), w in v} for v in c.values]
    theirs = [dict(v) for v in listing.values]
    assert ours == theirs
    assert ours[0][(1, 0)] == 3 and ours[0][(0, 0)] == 5


def test_conversion_includes_outputs():
    w = example()
    w.output = [1, 2, 3, 4]
    c = wta_to_coalgebra(w)
    assert [v[0] for v in c.values] == [1, 2, 3, 4]


def test_known_relation_is_a_backward_bisimulation():
    assert is_backward_bisimulation(example(), [[0, 1], [2], [3]])


def test_merging_c_and_d_is_not():
    assert not is_backward_bisimulation(example(), [[0, 1], [2, 3]])


def test_identity_relation():
    w = example()
    assert is_backward_bisimulation(w, [[x] for x in range(4)])
    assert is_backward_bisimulation(w, {(x, x) for x in range(4)})


def test_relation_must_be_equivalence():
    with pytest.raises(ValueError):
        is_backward_bisimulation(example(), {(0, 0), (1, 1), (2, 2), (3, 3), (0, 1)})
    with pytest.raises(ValueError):
        is_backward_bisimulation(example(), [[0, 1], [1, 2], [3]])
    with pytest.raises(ValueError):
        is_backward_bisimulation(example(), [[0, 1], [2]])


def test_minimize_example():
    block_of, _ = minimize_wta(example())
    assert as_partition(block_of) == [[0, 1], [2], [3]]


def test_one_state_and_empty_maps():
    w = WTA(M.ADD_REAL, ["x"], {"f": 1})
    block_of, _ = minimize_wta(w)
    assert block_of == [0]
    w = WTA(M.ADD_REAL, ["x", "y"], {"f": 1})
    c = wta_to_coalgebra(w, with_output=False)
    assert c.values == [(), ()]
    assert as_partition(minimize_wta(w)[0]) == [[0, 1]]


def test_unary_signature_is_a_weighted_automaton():
    w = WTA(M.ADD_REAL, ["x", "y", "z"], {"a": 1})
    w.add("a", (0,), 1, 0.5)
    w.add("a", (0,), 2, 0.5)
    assert as_partition(minimize_wta(w)[0]) == [[0], [1, 2]]


def _random_wta(rng, monoid, n, rank):
    sig = {"f": rank, "g": 1, "c": 0}
    w = WTA(monoid, [f"q{i}" for i in range(n)], sig)
    pool = WEIGHTS[monoid.token]
    for _ in range(rng.randint(0, 3 * n)):
        sym = rng.choice(list(sig))
        kids = tuple(rng.randrange(n) for _ in range(sig[sym]))
        w.add(sym, kids, rng.randrange(n), rng.choice(pool))
    return w


@pytest.mark.parametrize("monoid", [M.ADD_INT, M.ADD_REAL, M.MAX_NAT, M.MAX_INT, M.WORD_OR],
                         ids=lambda m: m.token)
def test_minimize_is_coarsest_bisimulation(monoid):
    rng = random.Random(21)
    for _ in range(40):
        n, rank = rng.randint(1, 6), rng.randint(1, 3)
        w = _random_wta(rng, monoid, n, rank)
        block_of, _ = minimize_wta(w)
        blocks = as_partition(block_of)
        assert is_backward_bisimulation(w, blocks)
        for i, j in itertools.combinations(range(len(blocks)), 2):
            merged = [b for k, b in enumerate(blocks) if k not in (i, j)] + [blocks[i] + blocks[j]]
            assert not is_backward_bisimulation(w, merged)
        # and the coalgebraic oracle agrees
        assert as_partition(naive_fixpoint(wta_to_coalgebra(w, with_output=False))) == blocks


def test_boolean_wta_against_relational_oracle():
    # (Word,or) restricted to weight 1 behaves like a nondeterministic tree automaton
    rng = random.Random(4)
    for _ in range(30):
        n = rng.randint(1, 6)
        w = WTA(M.WORD_OR, list(range(n)), {"f": 2, "a": 0})
        rel = set()
        for _ in range(rng.randint(0, 8)):
            kids, x = (rng.randrange(n), rng.randrange(n)), rng.randrange(n)
            w.add("f", kids, x, 1)
            rel.add((kids, x))
        for x in rng.sample(range(n), rng.randint(0, n)):
            w.add("a", (), x, 1)
        # relational backward bisimilarity by naive refinement
        block = [0] * n
        while True:
            sig = [(block[x], frozenset((block[a], block[b]) for (a, b), y in rel if y == x),
                    ("a", (), x) in w.transitions) for x in range(n)]
            ids = {}
            new = [ids.setdefault(s, len(ids)) for s in sig]
            if len(ids) == len(set(block)):
                break
            block = new
        assert as_partition(minimize_wta(w)[0]) == as_partition(new)


def test_generator_counts_and_determinism():
    a = generate_random(30, 50, seed=5)
    b = generate_random(30, 50, seed=5)
    assert a.transitions == b.transitions and a.output == b.output
    assert len(a.transitions) == 50 * 30
    per_state = [0] * 30
    for _, _, x in a.transitions:
        per_state[x] += 1
    assert set(per_state) == {50}
    assert len(set(a.transitions.values())) <= 50
    enc = desort(wta_to_coalgebra(a))
    assert enc.n == 51 * 30
    assert enc.m == 150 * 30
    assert generate_random(30, 50, seed=6).transitions != a.transitions


def test_generator_edge_cases():
    w = generate_random(5, 0)
    assert w.transitions == {}
    with pytest.raises(ValueError):
        generate_random(0, 1)
    with pytest.raises(ValueError):
        generate_random(1, 5, sigma=1, rank=1)


@pytest.mark.parametrize("name", ["maxnat", "maxint", "int", "real", "word", "complex", "nat"])
def test_generator_monoids(name):
    w = generate_random(8, 3, monoid=name, cap=5, seed=1)
    assert len(set(w.transitions.values())) <= 5
    assert all(v != w.monoid.unit for v in w.transitions.values())


def test_desorted_edge_bound():
    w = generate_random(20, 7, rank=3, seed=2)
    enc = desort(wta_to_coalgebra(w, with_output=False))
    k = len(w.transitions)
    assert enc.n == 20 + k
    assert enc.m <= (3 + 1) * k


def test_berkeley_binary_and_unary_rules():
    c = parse_berkeley("S_0 -> T_1 R_2 0.5\nS_0 → T_1 0.25\n")
    assert c.names == ["S_0", "T_1", "R_2"]
    text = format_coalgebra(c)
    assert "S__1" in text and "S__2" in text
    v = dict(c.values[0])
    weights = sorted(v.values())
    assert weights == [0.25, 0.5]
    assert c.values[1] == () and c.values[2] == ()


def test_berkeley_empty_file():
    c = parse_berkeley("")
    assert len(c) == 0
    assert desort(c).n == 0


@pytest.mark.parametrize("text", [
    "S_0 -> T_1 2.0", "S_0 -> T_1 x", "S_0 T_1 0.5", "S -> T_1 0.5",
    "S_0 -> T_1 0.5\nS_0 -> T_1 0.5",
])
def test_berkeley_errors(text):
    with pytest.raises(ValueError):
        parse_berkeley(text)


def test_mangle():
    assert mangle("NP") == "NP"
    assert mangle("@S") == "_40_S"
    assert mangle("1x") == "_1x"
