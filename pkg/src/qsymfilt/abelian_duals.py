"""Duals of finite abelian groups: characters, Fourier transform and length matrices."""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .algebra_core import group_algebra, pointwise_algebra, abelian_group
from .filtration import ColoredMatrix, OrthogonalFiltration
from .scalars import ONE, CycloNumber, zeta


class GroupError(ValueError):
    pass


class FiniteAbelianGroup:
    """Z_{r_1} + ... + Z_{r_d} with a generating set and its word length."""

    def __init__(self, factors: Sequence[int], generators: Sequence[Sequence[int]] | None = None):
        self.factors = tuple(int(r) for r in factors)
        if not self.factors or any(r < 1 for r in self.factors):
            raise GroupError("factor orders must be positive")
        self.elements = list(itertools.product(*[range(r) for r in self.factors]))
        self.index = {g: i for i, g in enumerate(self.elements)}
        if generators is None:
            generators = []
            for i, r in enumerate(self.factors):
                if r == 1:
                    continue
                e = [0] * len(self.factors)
                e[i] = 1
                generators.append(tuple(e))
                if r > 2:
                    e[i] = r - 1
                    generators.append(tuple(e))
        self.generators = [self.normalize(g) for g in generators]
        self.lengths = self._bfs()

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def exponent(self) -> int:
        return math.lcm(*self.factors)

    def normalize(self, g) -> tuple[int, ...]:
        g = tuple(int(x) for x in g)
        if len(g) != len(self.factors):
            raise GroupError(f"element {g} has the wrong number of coordinates")
        return tuple(x % r for x, r in zip(g, self.factors))

    def add(self, a, b) -> tuple[int, ...]:
        return tuple((x + y) % r for x, y, r in zip(a, b, self.factors))

    def neg(self, a) -> tuple[int, ...]:
        return tuple((-x) % r for x, r in zip(a, self.factors))

    def sub(self, a, b) -> tuple[int, ...]:
        return self.add(a, self.neg(b))

    def _bfs(self) -> dict:
        zero = tuple(0 for _ in self.factors)
        dist = {zero: 0}
        queue = deque([zero])
        while queue:
            g = queue.popleft()
            for s in self.generators:
                h = self.add(g, s)
                if h not in dist:
                    dist[h] = dist[g] + 1
                    queue.append(h)
        if len(dist) != self.order:
            raise GroupError("generating set does not generate the group")
        return dist

    def length(self, g) -> int:
        return self.lengths[self.normalize(g)]

    def __repr__(self):
        return f"FiniteAbelianGroup({self.factors})"


def length_partition(g: FiniteAbelianGroup) -> list[tuple[int, list[tuple[int, ...]]]]:
    top = max(g.lengths.values())
    return [(m, [x for x in g.elements if g.lengths[x] == m]) for m in range(top + 1)]


def character_value(g: FiniteAbelianGroup, s, gamma) -> CycloNumber:
    """chi_s(gamma) = prod_i zeta_{r_i}^{s_i gamma_i}, in the field of order lcm(r_i)."""
    n = g.exponent
    power = sum(si * gi * (n // r) for si, gi, r in zip(s, gamma, g.factors)) % n
    return zeta(n, power) if n > 1 else ONE


def character_table(g: FiniteAbelianGroup) -> np.ndarray:
    out = np.empty((g.order, g.order), dtype=object)
    for i, s in enumerate(g.elements):
        for j, gam in enumerate(g.elements):
            out[i, j] = character_value(g, s, gam)
    return out


def fourier_matrix(g: FiniteAbelianGroup) -> tuple[np.ndarray, np.ndarray]:
    """F[chi, gamma] = chi(gamma)/M and its inverse F^-1[gamma, chi] = conj chi(gamma)."""
    chi = character_table(g)
    m = Fraction(1, g.order)
    f = np.array([[x * m for x in row] for row in chi], dtype=object)
    finv = linalg.conj(chi).T.copy()
    return f, finv


def qm_matrices(g: FiniteAbelianGroup, check: bool = True) -> list[np.ndarray]:
    """(Q_m)[chi, chi'] = sum_{l(gamma)=m} conj(chi(gamma)) chi'(gamma), exactly.

    With ``check`` the result is compared against the Fourier conjugate of the
    diagonal length projections: Q_m^T = M F P_m F^-1, and sum_m Q_m = M I.
    """
    chi = character_table(g)
    chic = linalg.conj(chi)
    out = []
    parts = length_partition(g)
    for _, elems in parts:
        cols = [g.index[x] for x in elems]
        q = linalg.matmul(chic[:, cols], chi[:, cols].T.copy())
        out.append(q)
    if check:
        f, finv = fourier_matrix(g)
        total = linalg.exact_zeros((g.order, g.order))
        for (m, elems), q in zip(parts, out):
            p = linalg.exact_zeros((g.order, g.order))
            for x in elems:
                p[g.index[x], g.index[x]] = ONE
            conj_p = linalg.matmul(linalg.matmul(f, p), finv)
            if not linalg.exact_equal(q.T, np.array([[x * g.order for x in r] for r in conj_p], dtype=object)):
                raise ArithmeticError(f"Q_{m} disagrees with the Fourier conjugate of P_{m}")
            total = total + q
        if not linalg.exact_equal(total, np.array([[x * g.order for x in r] for r in linalg.exact_identity(g.order)], dtype=object)):
            raise ArithmeticError("sum of Q_m is not M times the identity")
    return out


def distance_matrix(g: FiniteAbelianGroup) -> np.ndarray:
    """l(s - t) for all pairs, the Cayley graph distance."""
    n = g.order
    out = np.zeros((n, n), dtype=int)
    for i, s in enumerate(g.elements):
        for j, t in enumerate(g.elements):
            out[i, j] = g.lengths[g.sub(s, t)]
    return out


def r_matrices(g: FiniteAbelianGroup) -> list[np.ndarray]:
    d = distance_matrix(g)
    return [(d == m).astype(int) for m in range(int(d.max()) + 1)]


@dataclass
class ReductionReport:
    factors: tuple
    coincide: bool
    q_partition: frozenset
    r_partition: frozenset
    n_classes_q: int
    n_classes_r: int
    q_matrices: list = field(default_factory=list, repr=False)


def color_reduction(g: FiniteAbelianGroup) -> ReductionReport:
    """Compare the joint colour classes of the Q_m with the Cayley distance classes."""
    qs = qm_matrices(g)
    joint = ColoredMatrix.joint([ColoredMatrix.from_matrix(q) for q in qs])
    dist = ColoredMatrix(distance_matrix(g), sorted(set(g.lengths.values())))
    qp, rp = joint.position_partition(), dist.position_partition()
    return ReductionReport(g.factors, qp == rp, qp, rp, len(qp), len(rp), qs)


def hypercube_reduction(k: int, max_k: int = 6) -> ReductionReport:
    if not 1 <= k <= max_k:
        raise GroupError(f"k must lie in 1..{max_k}")
    return color_reduction(FiniteAbelianGroup((2,) * k))


def conjecture_experiment(rs: Sequence[int] = (2, 3, 4, 5), ks: Sequence[int] = (1, 2, 3)) -> list[dict]:
    """Data for Z_r^k: does the Q-colour refinement equal the Cayley distance partition?"""
    rows = []
    for r in rs:
        for k in ks:
            if r**k > 256:
                continue
            rep = color_reduction(FiniteAbelianGroup((r,) * k))
            rows.append({"r": r, "k": k, "coincide": rep.coincide,
                         "q_classes": rep.n_classes_q, "r_classes": rep.n_classes_r})
    return rows


def dual_filtration(g: FiniteAbelianGroup) -> OrthogonalFiltration:
    """C[G] with its trace, filtered by word length."""
    data = abelian_group(g.factors)
    alg = group_algebra(data)
    parts = []
    for m, elems in length_partition(g):
        parts.append([alg.basis_element(g.index[x]) for x in elems])
    return OrthogonalFiltration(alg, parts, [f"l={m}" for m in range(len(parts))])


def fourier_filtration(g: FiniteAbelianGroup) -> OrthogonalFiltration:
    """The word-length filtration transported to C^M = C(dual group).

    lambda_gamma corresponds to the function chi -> chi(gamma); for Z_4 with
    generators +-1 these are the vectors f_k(l) = i^{kl} of the four-point example
    up to relabelling of the points.
    """
    chi = character_table(g)
    alg = pointwise_algebra(g.order)
    parts = []
    for m, elems in length_partition(g):
        parts.append([alg.element(chi[:, g.index[x]].copy()) for x in elems])
    return OrthogonalFiltration(alg, parts, [f"l={m}" for m in range(len(parts))])
