"""Shipped example algebras, filtrations and operator matrices."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .abelian_duals import FiniteAbelianGroup, dual_filtration
from .algebra_core import (
    dihedral_group_d4,
    group_algebra,
    matrix_algebra,
    pointwise_algebra,
    regular_spectral_decomposition,
    symmetric_group_s3,
)
from .filtration import OrthogonalFiltration
from .op_verifier import OperatorMatrix
from .scalars import zeta


def four_point_filtration() -> OrthogonalFiltration:
    """C^4 with the uniform state, f_k(l) = i^{kl} (l = 1..4), parts {f0}, {f1, f3}, {f2}."""
    alg = pointwise_algebra(4)
    f = [alg.element([zeta(4, (k * l) % 4) for l in range(1, 5)]) for k in range(4)]
    return OrthogonalFiltration(alg, [[f[0]], [f[1], f[3]], [f[2]]], ["V0", "V1", "V2"])


def two_segment_adjacency() -> np.ndarray:
    return np.array([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])


def z2_group_filtration() -> OrthogonalFiltration:
    """C[Z_2] with its trace, parts {1}, {lambda_g}."""
    return dual_filtration(FiniteAbelianGroup((2,)))


def z4_word_filtration() -> OrthogonalFiltration:
    return dual_filtration(FiniteAbelianGroup((4,)))


def cube_filtration(k: int) -> OrthogonalFiltration:
    return dual_filtration(FiniteAbelianGroup((2,) * k))


def d4_group_filtration() -> OrthogonalFiltration:
    """C[D_4] filtered by word length for the generators r, r^-1, s."""
    g = dihedral_group_d4()
    alg = group_algebra(g)
    gens = [1, 3, 4]
    dist = {g.identity: 0}
    frontier = [g.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = g.mul(x, s)
                if y not in dist:
                    dist[y] = dist[x] + 1
                    nxt.append(y)
        frontier = nxt
    top = max(dist.values())
    parts = [[alg.basis_element(x) for x in range(g.order) if dist[x] == m] for m in range(top + 1)]
    return OrthogonalFiltration(alg, parts, [f"l={m}" for m in range(top + 1)])


def s3_spectral_filtration() -> OrthogonalFiltration:
    """C(S_3) split into its isotypic subspaces (trivial, sign, standard)."""
    g = symmetric_group_s3()
    subs = regular_spectral_decomposition(g)
    alg = subs[0].basis[0].algebra
    return OrthogonalFiltration(alg, [s.basis for s in subs], [s.label for s in subs])


def three_point_edge_filtration() -> OrthogonalFiltration:
    """C^3 with the uniform trace; parts C1, span(1,-1,0), span(1,1,-2)."""
    alg = pointwise_algebra(3)
    return OrthogonalFiltration.from_coords(alg, [[[1, 1, 1]], [[1, -1, 0]], [[1, 1, -2]]])


def weighted_three_point_filtration() -> OrthogonalFiltration:
    """C^3 with state (1/2, 1/3, 1/6); parts C1, span(1,0,-3), span(1,-2,1)."""
    alg = pointwise_algebra(3, [Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)])
    return OrthogonalFiltration.from_coords(alg, [[[1, 1, 1]], [[1, 0, -3]], [[1, -2, 1]]])


def matrix_unit_filtration(q=Fraction(1, 3)) -> OrthogonalFiltration:
    """M_2 with omega = Tr(diag(q, 1-q) .); parts {1}, {e12}, {e21}, {(1-q) e11 - q e22}."""
    q = Fraction(q)
    alg = matrix_algebra(2, [q, 1 - q])
    parts = [[[1, 0, 0, 1]], [[0, 1, 0, 0]], [[0, 0, 1, 0]], [[1 - q, 0, 0, -q]]]
    return OrthogonalFiltration.from_coords(alg, parts, ["1", "e12", "e21", "h"])


def tracial_examples() -> dict[str, OrthogonalFiltration]:
    """Every shipped filtration whose state is a trace."""
    out = {
        "C^4 four-point": four_point_filtration(),
        "C[Z2]": z2_group_filtration(),
        "C[Z4]": z4_word_filtration(),
        "C[Z2^2]": cube_filtration(2),
        "C[Z2^3]": cube_filtration(3),
        "C[D4]": d4_group_filtration(),
        "C(S3)": s3_spectral_filtration(),
        "C^3 edge": three_point_edge_filtration(),
        "C^3 weighted": weighted_three_point_filtration(),
    }
    return out


def all_examples() -> dict[str, OrthogonalFiltration]:
    out = tracial_examples()
    out["M2 q=1/3"] = matrix_unit_filtration()
    return out


# -- operator matrices ----------------------------------------------------------------------


def dihedral_magic_unitary(theta: float = math.pi / 5) -> OperatorMatrix:
    """6 x 6 magic unitary with 2 x 2 entries built from two projections p, q."""
    p = np.array([[1.0, 0.0], [0.0, 0.0]])
    v = np.array([math.cos(theta), math.sin(theta)])
    q = np.outer(v, v)
    one = np.eye(2)
    zero = np.zeros((2, 2))
    pp, qp = one - p, one - q
    rows = [
        [p, pp, zero, zero, zero, zero],
        [pp, p, zero, zero, zero, zero],
        [zero, zero, one, zero, zero, zero],
        [zero, zero, zero, q, qp, zero],
        [zero, zero, zero, qp, q, zero],
        [zero, zero, zero, zero, zero, one],
    ]
    return OperatorMatrix(np.array(rows, dtype=complex), None, 1e-10)


def s3_translation_magic_unitary() -> OperatorMatrix:
    """alpha(e_j) = sum_i e_i (x) p_ij with p_ij(g) = [g pi_i = pi_j], as diagonal 6 x 6 entries."""
    g = symmetric_group_s3()
    n = g.order
    e = np.zeros((n, n, n, n))
    for i in range(n):
        for h in range(n):
            j = g.mul(h, i)
            e[i, j, h, h] = 1
    return OperatorMatrix(e, None, 1e-10)
