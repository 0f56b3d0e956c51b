import random

from hypothesis import given, strategies as st

from corefine.partition import RefinablePartition


def test_from_keys():
    p = RefinablePartition.from_keys("AAB")
    assert p.blocks() == [[0, 1], [2]]
    assert len(RefinablePartition.from_keys([7] * 5)) == 1
    assert len(RefinablePartition.from_keys(range(4))) == 4


def test_mark_and_split():
    p = RefinablePartition(3)
    p.mark(1)
    assert p.marked_count(0) == 1
    p.mark(1)  # second mark is a no-op
    assert p.marked_count(0) == 1
    nb = p.split_marked(0)
    assert sorted(p.states_of(nb)) == [1]
    assert sorted(p.states_of(0)) == [0, 2]
    assert p.size(nb) == 1 and p.size(0) == 2
    assert p.marked_count(0) == 0 and p.marked_count(nb) == 0
    p.validate()


def test_split_of_marked_zero():
    p = RefinablePartition(3)
    p.mark(0)
    nb = p.split_marked(0)
    assert p.states_of(nb) == [0]
    assert sorted(p.states_of(0)) == [1, 2]


def test_no_split_when_all_or_none_marked():
    p = RefinablePartition(3)
    assert p.split_marked(0) is None
    for x in range(3):
        p.mark(x)
    assert p.marked_count(0) == 3
    assert p.split_marked(0) is None
    assert p.marked_count(0) == 0 and len(p) == 1


def test_block_of_stable_under_marks():
    p = RefinablePartition.from_keys([0, 0, 1, 1])
    before = [p.block_of(x) for x in range(4)]
    p.mark(0)
    p.mark(3)
    assert [p.block_of(x) for x in range(4)] == before


@given(st.integers(1, 30), st.lists(st.lists(st.integers(0, 29), max_size=10), max_size=20))
def test_random_splits_only_bisect(n, rounds):
    p = RefinablePartition(n)
    for marks in rounds:
        old = {frozenset(b) for b in p.blocks()}
        xs = [x for x in marks if x < n]
        touched = {p.block_of(x) for x in xs}
        for x in xs:
            p.mark(x)
        for b in touched:
            p.split_marked(b)
        p.validate()
        new = {frozenset(b) for b in p.blocks()}
        # every new block lies inside an old one
        assert all(any(b <= o for o in old) for b in new)
        assert sum(len(b) for b in new) == n


def test_larger_random_run():
    rng = random.Random(0)
    p = RefinablePartition(500)
    for _ in range(200):
        for x in rng.sample(range(500), 40):
            p.mark(x)
        for b in range(len(p)):
            p.split_marked(b)
    p.validate()
