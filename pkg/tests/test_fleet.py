import numpy as np
import pytest

from qsymfilt.fleet import (
    DEFAULT_SEED,
    build_fleet,
    dual_z_family,
    haar_unitary,
    nonnormal_hplus_instance,
    random_projection,
)
from qsymfilt.op_verifier import bar, check_hplus_relations, normality


def test_deterministic_for_a_seed():
    a = build_fleet(DEFAULT_SEED, counts=(3, 3, 3, 3))
    b = build_fleet(DEFAULT_SEED, counts=(3, 3, 3, 3))
    assert all(np.array_equal(x.matrix.entries, y.matrix.entries) for x, y in zip(a, b))
    c = build_fleet(DEFAULT_SEED + 1, counts=(3, 3, 3, 3))
    assert any(not np.array_equal(x.matrix.entries, y.matrix.entries) for x, y in zip(a, c)
               if x.matrix.entries.shape == y.matrix.entries.shape)


def test_default_fleet_composition(fleet):
    counts = {}
    for inst in fleet:
        counts[inst.family] = counts.get(inst.family, 0) + 1
    assert counts == {"signed": 30, "dual_z": 15, "group_algebra": 30, "nonnormal": 30}
    assert {inst.matrix.n for inst in fleet if inst.family == "signed"} == {1, 2, 3}


def test_group_algebra_instances_are_quantum(fleet):
    # some entries fail to commute, so the instances are not classical
    found = False
    for inst in fleet:
        if inst.family != "group_algebra" or inst.matrix.m < 4:
            continue
        blocks = inst.matrix.entries.reshape(-1, inst.matrix.m, inst.matrix.m)
        for a in blocks:
            for b in blocks:
                if np.linalg.norm(a @ b - b @ a) > 1e-6:
                    found = True
    assert found


def test_haar_and_projection_helpers():
    rng = np.random.default_rng(0)
    w = haar_unitary(rng, 5)
    assert np.allclose(w.conj().T @ w, np.eye(5))
    p = random_projection(rng, 4, 2)
    assert np.allclose(p @ p, p) and np.isclose(np.trace(p).real, 2)


def test_nonnormal_instances():
    rng = np.random.default_rng(7)
    u = nonnormal_hplus_instance(rng, 2, 2)
    assert check_hplus_relations(u).ok
    assert not normality(u).ok
    with pytest.raises(ValueError):
        nonnormal_hplus_instance(rng, 1, 2)


def test_dual_z_bar_structure():
    u = dual_z_family(np.random.default_rng(2), 2, 3)
    for x in u.labels:
        assert np.allclose(u[x, x].conj().T, u[bar(x), bar(x)])
