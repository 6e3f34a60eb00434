import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qsymfilt.fleet import signed_permutation
from qsymfilt.op_verifier import intertwiner_checks, lemma_t_operator
from qsymfilt.partition_category import (
    ColoredNoncrossingPartition,
    PartitionError,
    balanced_predicate,
    compose,
    enumerate_partitions,
    is_noncrossing,
    noncrossing_partitions,
    pair_predicate,
    set_partitions,
    span_containment_check,
    t_pi,
    t_pi_bruteforce,
    lemma_partition,
)

CATALAN = [1, 1, 2, 5, 14, 42, 132, 429, 1430]
BELL = [1, 1, 2, 5, 15, 52, 203, 877, 4140]


def crosses_bruteforce(blocks, k, l):
    """Draw points on a circle in boundary order and test every pair of chords."""
    order = list(range(k)) + list(range(k + l - 1, k - 1, -1))
    pos = {p: i for i, p in enumerate(order)}
    chords = [(b, tuple(sorted(pos[p] for p in pair))) for b in blocks for pair in itertools.combinations(b, 2)]
    for (b1, (a, c)), (b2, (x, y)) in itertools.combinations(chords, 2):
        if b1 != b2 and (a < x < c < y or x < a < y < c):
            return True
    return False


def test_set_partition_counts():
    assert [len(list(set_partitions(n))) for n in range(9)] == BELL


@pytest.mark.parametrize("n", range(9))
def test_noncrossing_counts_are_catalan(n):
    for k in range(n + 1):
        assert len(noncrossing_partitions(k, n - k)) == CATALAN[n]


@pytest.mark.parametrize("k,l", [(4, 4), (3, 5), (0, 8), (8, 0), (2, 3)])
def test_noncrossing_matches_bruteforce(k, l):
    for blocks in set_partitions(k + l):
        assert is_noncrossing(blocks, k, l) == (not crosses_bruteforce(blocks, k, l))


def test_small_cases():
    assert len(enumerate_partitions(2, 2, colored=False)) == 14
    assert enumerate_partitions(0, 0, colored=False) == [()]
    through = [p for p in enumerate_partitions(1, 1) if pair_predicate(p)]
    assert {p.colors for p in through} == {"ww", "bb"}
    assert len(enumerate_partitions(1, 1, colored=False)) == 2


def test_size_limits(monkeypatch):
    with pytest.raises(PartitionError):
        enumerate_partitions(5, 4)
    monkeypatch.setenv("QSG_MAX_SIZE", "10")
    with pytest.raises(PartitionError):
        enumerate_partitions(2, 2)


def test_crossing_partition_rejected():
    with pytest.raises(PartitionError):
        ColoredNoncrossingPartition(4, 0, ((0, 2), (1, 3)), "wwww")


def test_balanced_predicate():
    assert balanced_predicate(ColoredNoncrossingPartition(1, 1, ((0, 1),), "ww"))
    assert not balanced_predicate(ColoredNoncrossingPartition(1, 1, ((0, 1),), "wb"))
    assert balanced_predicate(ColoredNoncrossingPartition(2, 0, ((0, 1),), "wb"))
    assert balanced_predicate(lemma_partition())


def test_identity_partition():
    for n in (1, 2, 3):
        p = ColoredNoncrossingPartition(1, 1, ((0, 1),), "ww")
        assert np.array_equal(t_pi(p, n), np.eye(2 * n))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_lemma_partition_gives_hardcoded_operator(n):
    assert np.array_equal(t_pi(lemma_partition(), n), lemma_t_operator(n))


def test_singletons_are_unconstrained():
    p = ColoredNoncrossingPartition(1, 2, ((0,), (1,), (2,)), "wbw")
    assert np.array_equal(t_pi(p, 1), np.ones((4, 2)))


@pytest.mark.parametrize("k,l", [(2, 2), (1, 3), (3, 1), (0, 4), (2, 1)])
def test_t_pi_matches_bruteforce(k, l):
    for p in enumerate_partitions(k, l, predicate=None)[::7]:
        for n in (1, 2):
            assert np.array_equal(t_pi(p, n), t_pi_bruteforce(p, n))


def _pairs(k, l):
    return [p for p in enumerate_partitions(k, l) if pair_predicate(p)]


@pytest.mark.parametrize("n", [1, 2])
def test_composition_matches_matrix_product_up_to_loops(n):
    for k, mid, m in [(1, 1, 1), (2, 2, 2), (0, 2, 2), (2, 2, 0), (1, 3, 1)]:
        for top in _pairs(k, mid):
            for bottom in _pairs(mid, m):
                if top.colors[k:] != bottom.colors[:mid]:
                    continue
                p, loops = compose(top, bottom)
                lhs = t_pi(bottom, n) @ t_pi(top, n)
                assert np.array_equal(lhs, (2 * n) ** loops * t_pi(p, n))


def test_cap_cup_loop():
    cup = ColoredNoncrossingPartition(0, 2, ((0, 1),), "wb")
    cap = ColoredNoncrossingPartition(2, 0, ((0, 1),), "wb")
    p, loops = compose(cup, cap)
    assert loops == 1 and p.size == 0
    assert (t_pi(cap, 2) @ t_pi(cup, 2))[0, 0] == 4


def test_span_check_examples(fleet):
    kp = next(i.matrix for i in fleet if i.family == "group_algebra" and i.matrix.n == 2)
    nn = next(i.matrix for i in fleet if i.family == "nonnormal")
    through = ColoredNoncrossingPartition(1, 1, ((0, 1),), "ww")
    assert span_containment_check([through], kp, 1, 1).all_pass
    assert span_containment_check([lemma_partition()], kp, 2, 2).all_pass
    assert not span_containment_check([lemma_partition()], nn, 2, 2).all_pass


def test_span_rank_classical():
    # a scalar signed permutation: all balanced pair maps intertwine and the
    # rank of their span is bounded by the full commutant dimension
    u = signed_permutation([1, 0], [1, -1])
    ps = _pairs(2, 2)
    rep = span_containment_check(ps, u, 2, 2)
    assert rep.all_pass
    assert 0 < rep.rank <= rep.solution_dim


def test_wrong_leg_counts_rejected(fleet):
    with pytest.raises(PartitionError):
        span_containment_check([lemma_partition()], fleet[0].matrix, 1, 1)


def test_fleet_pair_partitions_small(kplus_fleet):
    parts = {(k, l): _pairs(k, l) for k in range(5) for l in range(5 - k) if (k + l) % 2 == 0}
    for inst in kplus_fleet:
        u = inst.matrix
        for (k, l), ps in parts.items():
            if ps:
                checks = intertwiner_checks([t_pi(p, u.n) for p in ps], u, k, l, 1e-8)
                assert all(c.ok for c in checks), (inst.family, k, l)


def test_serialization_roundtrip():
    for p in enumerate_partitions(2, 2)[:20]:
        assert ColoredNoncrossingPartition.from_dict(p.to_dict()) == p
    assert "upper" in lemma_partition().render()


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.data())
def test_random_partition_maps(k, l, data):
    ps = enumerate_partitions(k, l, predicate=None)
    p = data.draw(st.sampled_from(ps))
    assert np.array_equal(t_pi(p, 1), t_pi_bruteforce(p, 1))
