"""Seeded generators of operator matrices on the labels (+-1, k)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .op_verifier import OperatorMatrix, bar, j_labels

DEFAULT_SEED = 0x5EED


@dataclass
class Instance:
    family: str
    matrix: OperatorMatrix
    kplus: bool  # expected to satisfy the K+ relations (normal entries)


def haar_unitary(rng: np.random.Generator, m: int) -> np.ndarray:
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_projection(rng: np.random.Generator, m: int, rank: int | None = None) -> np.ndarray:
    if rank is None:
        rank = int(rng.integers(0, m + 1))
    w = haar_unitary(rng, m)[:, :rank]
    return w @ w.conj().T


def signed_permutation(perm, signs, m: int = 1) -> OperatorMatrix:
    """alpha(gamma_k) = gamma_{perm[k]}^{signs[k]} as a scalar matrix on J_n (times I_m)."""
    n = len(perm)
    labels = j_labels(n)
    idx = {x: i for i, x in enumerate(labels)}
    mat = np.zeros((2 * n, 2 * n))
    for k in range(n):
        for j in (1, -1):
            image = (signs[k] * j, perm[k] + 1)
            mat[idx[image], idx[(j, k + 1)]] = 1
    e = np.einsum("xy,ab->xyab", mat, np.eye(m))
    return OperatorMatrix(e, labels)


def random_signed_permutation(rng, n: int) -> OperatorMatrix:
    perm = rng.permutation(n)
    signs = rng.choice([1, -1], size=n)
    return signed_permutation(perm, signs)


def dual_z_family(rng, n: int, m: int) -> OperatorMatrix:
    """diag(u_1, .., u_n, u_1*, .., u_n*) with Haar unitaries u_k."""
    us = [haar_unitary(rng, m) for _ in range(n)]
    e = np.zeros((2 * n, 2 * n, m, m), dtype=complex)
    for k, u in enumerate(us):
        e[k, k] = u
        e[n + k, n + k] = u.conj().T
    return OperatorMatrix(e, j_labels(n))


def _latin_magic(rng, n: int) -> np.ndarray:
    """A scalar n x n permutation matrix (a classical magic unitary)."""
    p = rng.permutation(n)
    out = np.zeros((n, n))
    out[np.arange(n), p] = 1
    return out


def group_algebra_instance(rng, n: int, m: int) -> OperatorMatrix:
    """U_{(i k),(j b)} = w * (A^(k)_{ij} (x) B_{k b}) with A^(k) = [[p, 1-p], [1-p, p]].

    The p_k are random projections (generically non-commuting, i.e. a
    representation of Z_2 * Z_2 * ...), B is a magic unitary whose entries are
    the projections of a random representation of the dihedral-type pair, and the
    scalar phases w satisfy w_{bar x, bar y} = conj(w_{x, y}).
    """
    labels = j_labels(n)
    ps = [random_projection(rng, m) for _ in range(n)]
    if n == 2:
        q = random_projection(rng, 2)
        b = np.zeros((2, 2, 2, 2), dtype=complex)
        b[0, 0] = b[1, 1] = q
        b[0, 1] = b[1, 0] = np.eye(2) - q
        mb = 2
    else:
        b = _latin_magic(rng, n)[:, :, None, None].astype(complex)
        mb = 1
    e = np.zeros((2 * n, 2 * n, m * mb, m * mb), dtype=complex)
    phases = {}
    for x in labels:
        for y in labels:
            if (x, y) in phases:
                continue
            w = np.exp(2j * np.pi * rng.random())
            phases[(x, y)] = w
            phases[(bar(x), bar(y))] = np.conj(w)
    eye = np.eye(m)
    for a, (i, k) in enumerate(labels):
        p = ps[k - 1]
        for c, (j, beta) in enumerate(labels):
            aij = p if i == j else eye - p
            e[a, c] = phases[((i, k), (j, beta))] * np.kron(aij, b[k - 1, beta - 1])
    return OperatorMatrix(e, labels)


def _paired_permutation(rng, n: int, m: int):
    """A permutation sigma of J_n x [m] with sigma(y, b) = (x, a) iff sigma(bar y, a) = (bar x, b)."""
    labels = j_labels(n)
    points = [(y, b) for y in labels for b in range(m)]
    targets = list(points)

    def solve(sigma: dict, used: set):
        free = [p for p in points if p not in sigma]
        if not free:
            return sigma
        y, b = free[0]
        order = rng.permutation(len(targets))
        for t in order:
            x, a = targets[t]
            partner_src, partner_dst = (bar(y), a), (bar(x), b)
            if (x, a) in used or partner_dst in used or partner_src in sigma:
                continue
            if partner_src == (y, b) or partner_dst == (x, a):
                continue
            sigma[(y, b)] = (x, a)
            sigma[partner_src] = partner_dst
            used.update({(x, a), partner_dst})
            res = solve(sigma, used)
            if res is not None:
                return res
            del sigma[(y, b)]
            del sigma[partner_src]
            used.difference_update({(x, a), partner_dst})
        return None

    return solve({}, set())


def nonnormal_hplus_instance(rng, n: int, m: int, max_tries: int = 200) -> OperatorMatrix:
    """Block pattern of a paired permutation with a non-normal block, conjugated by a Haar unitary."""
    if n < 2:
        raise ValueError("non-normal instances need n >= 2")
    labels = j_labels(n)
    idx = {x: i for i, x in enumerate(labels)}
    for _ in range(max_tries):
        sigma = _paired_permutation(rng, n, m)
        e = np.zeros((2 * n, 2 * n, m, m), dtype=complex)
        for (y, b), (x, a) in sigma.items():
            e[idx[x], idx[y], a, b] = 1
        blocks = e.reshape(-1, m, m)
        if any(not np.allclose(z @ z.conj().T, z.conj().T @ z) for z in blocks):
            w = haar_unitary(rng, m)
            return OperatorMatrix(e, labels).conjugate_by(w)
    raise RuntimeError("no non-normal pattern found")


def build_fleet(seed: int = DEFAULT_SEED, counts=(30, 15, 30, 30)) -> list[Instance]:
    """Signed permutations, dual-Z families, group-algebra instances, non-normal H+ instances."""
    rng = np.random.default_rng(seed)
    out = []
    n_signed, n_dual, n_group, n_nonnormal = counts
    for t in range(n_signed):
        out.append(Instance("signed", random_signed_permutation(rng, 1 + t % 3), True))
    for t in range(n_dual):
        out.append(Instance("dual_z", dual_z_family(rng, 1 + t % 2, 1 + t % 3), True))
    for t in range(n_group):
        out.append(Instance("group_algebra", group_algebra_instance(rng, 1 + t % 2, 2 + t % 2), True))
    for t in range(n_nonnormal):
        out.append(Instance("nonnormal", nonnormal_hplus_instance(rng, 2, 2 + t % 2), False))
    return out
