from math import comb

import numpy as np
import pytest

from qsymfilt import linalg
from qsymfilt.abelian_duals import (
    FiniteAbelianGroup,
    GroupError,
    character_table,
    color_reduction,
    conjecture_experiment,
    distance_matrix,
    dual_filtration,
    fourier_filtration,
    fourier_matrix,
    hypercube_reduction,
    qm_matrices,
    r_matrices,
)
from qsymfilt.filtration import validate
from qsymfilt.scalars import CycloNumber

Q = CycloNumber.rational


def hamming(s, t):
    return sum(a != b for a, b in zip(s, t))


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_q1_q2_closed_forms(k):
    g = FiniteAbelianGroup((2,) * k)
    qs = qm_matrices(g)
    for i, s in enumerate(g.elements):
        for j, t in enumerate(g.elements):
            l = hamming(s, t)
            assert qs[1][i, j] == Q(k - 2 * l)
            if k >= 2:
                assert qs[2][i, j] == Q(comb(k - l, 2) + comb(l, 2) - (k - l) * l)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_qm_is_krawtchouk(k):
    # direct oracle: (Q_m)_{s,t} = sum over r of weight m of (-1)^{(s-t).r}
    g = FiniteAbelianGroup((2,) * k)
    qs = qm_matrices(g)
    for m, q in enumerate(qs):
        for i, s in enumerate(g.elements):
            for j, t in enumerate(g.elements):
                val = sum((-1) ** (sum((a - b) * c for a, b, c in zip(s, t, r)) % 2)
                          for r in g.elements if sum(r) == m)
                assert q[i, j] == Q(val)


@pytest.mark.parametrize("k", range(1, 7))
def test_hypercube_reduction(k):
    rep = hypercube_reduction(k)
    assert rep.coincide
    assert rep.n_classes_r == k + 1


def test_hypercube_limit():
    with pytest.raises(GroupError):
        hypercube_reduction(7)


def test_fourier_inverse():
    g = FiniteAbelianGroup((3, 4))
    f, finv = fourier_matrix(g)
    assert linalg.exact_equal(linalg.matmul(f, finv), linalg.exact_identity(g.order))


def test_character_orthogonality_z3_z4():
    g = FiniteAbelianGroup((3, 4))
    chi = character_table(g)
    gram = linalg.matmul(chi, linalg.dagger(chi))
    expected = np.array([[x * g.order for x in row] for row in linalg.exact_identity(g.order)], dtype=object)
    assert linalg.exact_equal(gram, expected)


def test_word_lengths_with_symmetric_generators():
    g = FiniteAbelianGroup((5,))
    assert [g.length((x,)) for x in range(5)] == [0, 1, 2, 2, 1]
    d = distance_matrix(g)
    assert d[0, 3] == 2
    assert [r.sum() for r in r_matrices(g)] == [5, 10, 10]


def test_custom_generators():
    g = FiniteAbelianGroup((4,), generators=[(1,)])  # one-directional steps
    assert g.length((3,)) == 3
    with pytest.raises(GroupError):
        FiniteAbelianGroup((4,), generators=[(2,)])


@pytest.mark.parametrize("factors", [(3,), (4,), (3, 3), (4, 4), (3, 3, 3)])
def test_small_reductions_coincide(factors):
    assert color_reduction(FiniteAbelianGroup(factors)).coincide


def test_mixed_orders_can_split_a_length_class():
    # in Z2 + Z3 the length-one elements (1, 0) and (0, +-1) have different
    # character sums, so the Q colouring is strictly finer than the distance
    rep = color_reduction(FiniteAbelianGroup((2, 3)))
    assert not rep.coincide
    assert (rep.n_classes_q, rep.n_classes_r) == (4, 3)


def test_conjecture_experiment_rows():
    rows = conjecture_experiment((2, 3), (1, 2))
    assert len(rows) == 4 and all(r["coincide"] for r in rows)


@pytest.mark.parametrize("factors", [(2,), (4,), (2, 2), (3, 2)])
def test_dual_filtrations_valid(factors):
    g = FiniteAbelianGroup(factors)
    assert validate(dual_filtration(g)).valid
    assert validate(fourier_filtration(g)).valid
