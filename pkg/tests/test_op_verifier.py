import numpy as np
import pytest

from qsymfilt import catalog
from qsymfilt.fleet import haar_unitary, signed_permutation
from qsymfilt.free_words import FreeProduct, block_length, enumerate_ball, word_length
from qsymfilt.op_verifier import (
    OperatorMatrix,
    VerifierError,
    antipode_transform,
    bar,
    block2,
    check_hplus_relations,
    check_kplus_relations,
    counit_transform,
    filtration_preservation_check,
    induced_action_coefficients,
    intertwiner_check,
    is_block_unitary,
    is_magic_unitary,
    j_labels,
    lemma52_suite,
    lemma_t_operator,
    normality,
    partition_preservation_check,
    permutation_operator_matrix,
    range_projections,
    s3_sum_condition,
    tensor_composite,
    tensor_power,
)


def kron_oracle(t, u, k, l):
    """Direct (T x I) U^k - U^l (T x I) with explicit Kronecker products."""
    m = u.m
    uk = tensor_power(u, k).flat() if k else np.eye(m)
    ul = tensor_power(u, l).flat() if l else np.eye(m)
    tt = np.kron(t, np.eye(m))
    return np.linalg.norm(tt @ uk - ul @ tt, 2)


def test_labels_and_bar():
    assert j_labels(2) == [(1, 1), (1, 2), (-1, 1), (-1, 2)]
    assert bar((1, 2)) == (-1, 2)


def test_identity_passes_everything():
    u = OperatorMatrix.from_scalar(np.eye(4))
    assert check_hplus_relations(u).ok and check_kplus_relations(u).ok
    assert is_magic_unitary(u).ok


def test_flat_layout():
    rng = np.random.default_rng(1)
    e = rng.standard_normal((2, 2, 3, 3))
    u = OperatorMatrix(e)
    f = u.flat()
    assert np.allclose(f[3:6, 0:3], e[1, 0])
    assert np.allclose(OperatorMatrix.from_flat(f, 2).entries, e)


def test_scalar_unitary_is_not_block_partial_isometry():
    w = haar_unitary(np.random.default_rng(3), 4)
    rep = check_hplus_relations(OperatorMatrix.from_scalar(w))
    assert rep.flags["unitary"] and not rep.ok


@pytest.mark.parametrize("kl", [(1, 1), (2, 1), (1, 2), (2, 2), (0, 2), (2, 0), (3, 1)])
def test_intertwiner_check_matches_kronecker_oracle(fleet, kl):
    k, l = kl
    rng = np.random.default_rng(sum(kl))
    for inst in fleet[::17]:
        u = inst.matrix
        t = rng.standard_normal((u.d**l, u.d**k))
        c = intertwiner_check(t, u, k, l, tol=1e-300)
        assert c.violation == pytest.approx(kron_oracle(t, u, k, l), rel=1e-9, abs=1e-12)


def test_identity_intertwines(kplus_fleet):
    for inst in kplus_fleet:
        assert intertwiner_check(np.eye(inst.matrix.d), inst.matrix, 1, 1).ok


def test_lemma_operator_structure():
    n = 2
    labels = j_labels(n)
    d = len(labels)
    t = lemma_t_operator(n)
    for a, z in enumerate(labels):
        for b, x in enumerate(labels):
            col = t[:, a * d + b]
            if x == bar(z):
                target = labels.index(bar(z)) * d + a
                assert col[target] == 1 and col.sum() == 1
            else:
                assert not col.any()


def test_fleet_relations(fleet):
    for inst in fleet:
        assert check_hplus_relations(inst.matrix).ok, inst.family
        assert check_kplus_relations(inst.matrix).ok == inst.kplus, inst.family


def test_lemma_equivalence_over_fleet(fleet):
    assert len(fleet) >= 100
    families = {inst.family for inst in fleet}
    assert families == {"signed", "dual_z", "group_algebra", "nonnormal"}
    for inst in fleet:
        rep = lemma52_suite(inst.matrix.with_tol(1e-9))
        assert rep.agree, (inst.family, rep)
        assert rep.flags == (inst.kplus,) * 3


def test_lemma_suite_requires_hplus():
    w = haar_unitary(np.random.default_rng(5), 4)
    with pytest.raises(VerifierError):
        lemma52_suite(OperatorMatrix.from_scalar(w))


def test_block2_chain(kplus_fleet):
    for inst in kplus_fleet:
        u = inst.matrix
        assert normality(u).ok
        assert is_magic_unitary(range_projections(u)).ok
        assert block2(u).ok


def test_hopf_maps_preserve_kplus(kplus_fleet):
    by_n = {}
    for inst in kplus_fleet:
        u = inst.matrix.with_tol(1e-8)
        assert check_kplus_relations(antipode_transform(u)).ok
        assert check_kplus_relations(counit_transform(u)).ok
        by_n.setdefault(u.n, []).append(u)
    for us in by_n.values():
        for u, v in zip(us, us[1:] + us[:1]):
            if u.m * v.m <= 36:
                assert check_kplus_relations(tensor_composite(u, v).with_tol(1e-8)).ok


def test_hopf_maps_preserve_hplus(fleet):
    non = [i.matrix for i in fleet if i.family == "nonnormal"]
    for u, v in zip(non, non[1:]):
        assert check_hplus_relations(antipode_transform(u).with_tol(1e-8)).ok
        assert check_hplus_relations(tensor_composite(u, v).with_tol(1e-8)).ok


def test_signed_permutation_antipode_is_inverse():
    u = signed_permutation([1, 2, 0], [1, -1, 1])
    s = antipode_transform(u)
    assert np.allclose(s.flat() @ u.flat(), np.eye(6))


def test_induced_action_single_letter(fleet):
    u = fleet[100].matrix
    g = FreeProduct.free_group(u.n)
    coeffs = induced_action_coefficients(u, g.generator(0))
    col = u.index((1, 1))
    for i, s in j_labels(u.n):
        w = g.generator(s - 1, i)
        assert np.allclose(coeffs.get(w, 0), u.entries[u.index((i, s)), col])


def test_induced_action_classical_square():
    u = signed_permutation([1, 0], [-1, 1])  # gamma_1 -> gamma_2^-1
    g = FreeProduct.free_group(2)
    coeffs = induced_action_coefficients(u, g.generator(0, 2))
    nonzero = {w for w, op in coeffs.items() if np.abs(op).max() > 1e-12}
    assert nonzero == {g.generator(1, -2)}


def test_induced_action_nonnormal_square_leaks_block_length(fleet):
    u = next(i.matrix for i in fleet if i.family == "nonnormal")
    g = FreeProduct.free_group(2)
    coeffs = induced_action_coefficients(u, g.generator(0, 2), enumerate_ball(g, 2))
    leak = max(np.linalg.norm(op, 2) for w, op in coeffs.items() if block_length(w) == 2)
    assert leak > 1e-6
    assert all(word_length(w) == 2 for w, op in coeffs.items() if np.abs(op).max() > 1e-12)


def test_induced_action_detects_escape(fleet):
    u = fleet[0].matrix
    g = FreeProduct.free_group(u.n)
    with pytest.raises(VerifierError):
        induced_action_coefficients(u, g.generator(0, 3), enumerate_ball(g, 2))


def test_shape_preservation(fleet):
    balls = {}
    for inst in fleet:
        u = inst.matrix
        if u.n not in balls:
            balls[u.n] = enumerate_ball(FreeProduct.free_group(u.n), 4 if u.n < 3 else 3)
        assert partition_preservation_check(u, balls[u.n], "shape").ok == inst.kplus, inst.family


def test_s3_examples_preserve_spectral_filtration():
    f = catalog.s3_spectral_filtration()
    d = catalog.dihedral_magic_unitary().with_tol(1e-10)
    assert is_magic_unitary(d).ok
    assert s3_sum_condition(d).ok
    assert filtration_preservation_check(d, f, 1e-10).ok
    t = catalog.s3_translation_magic_unitary()
    assert is_magic_unitary(t).ok and filtration_preservation_check(t, f).ok


def test_magic_unitary_breaking_sum_condition_is_rejected():
    f = catalog.s3_spectral_filtration()
    rng = np.random.default_rng(0x5EED)
    rejected = 0
    for _ in range(20):
        perm = rng.permutation(6)
        u = permutation_operator_matrix(perm)
        same_sign = set(perm[:3].tolist()) in ({0, 1, 2}, {3, 4, 5})
        assert is_magic_unitary(u).ok
        assert filtration_preservation_check(u, f).ok == same_sign
        assert s3_sum_condition(u).ok == same_sign
        rejected += not same_sign
    assert rejected > 0


def test_quantum_magic_unitary_mixing_signs_is_rejected():
    # dihedral pattern placed across the even/odd split breaks the sum condition
    d = catalog.dihedral_magic_unitary()
    perm = [0, 3, 2, 1, 4, 5]
    e = d.entries[np.ix_(perm, perm)]
    u = OperatorMatrix(e, None, 1e-10)
    assert is_magic_unitary(u).ok
    f = catalog.s3_spectral_filtration()
    assert not s3_sum_condition(u).ok
    assert not filtration_preservation_check(u, f).ok


def test_block_unitary_detects_failure():
    e = np.zeros((2, 2, 1, 1))
    e[0, 0] = 1
    assert not is_block_unitary(OperatorMatrix(e)).ok
