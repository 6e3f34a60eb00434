"""Orthogonal filtrations of a StructuredAlgebra and the matrices built from them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence

import numpy as np

from . import linalg
from .algebra_core import (
    AlgebraElement,
    StructuredAlgebra,
    coords_matrix,
    multiply,
    omega_pair,
    orthogonalize,
    star,
)
from .scalars import CycloNumber, rational_sqrt


class FiltrationError(ValueError):
    pass


@dataclass
class Violation:
    kind: str  # "i", "ii" or "iii"
    indices: tuple
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    @property
    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


class OrthogonalFiltration:
    """Indexed family of subspaces V_0, V_1, ... given by basis vectors."""

    def __init__(self, algebra: StructuredAlgebra, parts: Sequence[Sequence[AlgebraElement]],
                 labels: Sequence[Hashable] | None = None, levels: Sequence[int] | None = None):
        if not parts:
            raise FiltrationError("a filtration needs at least one part")
        self.algebra = algebra
        self.parts = [list(p) for p in parts]
        for p in self.parts:
            if not p:
                raise FiltrationError("empty part")
            for v in p:
                if v.algebra is not algebra:
                    raise FiltrationError("part vector belongs to another algebra")
        self.labels = list(labels) if labels is not None else list(range(len(parts)))
        self.levels = list(levels) if levels is not None else list(range(len(parts)))
        if len(self.labels) != len(self.parts) or len(self.levels) != len(self.parts):
            raise FiltrationError("labels/levels must match the number of parts")
        self._projections = None

    @classmethod
    def from_coords(cls, algebra, parts, labels=None, levels=None):
        return cls(algebra, [[algebra.element(v) for v in p] for p in parts], labels, levels)

    @property
    def exact(self) -> bool:
        return all(v.exact for p in self.parts for v in p)

    @property
    def dims(self) -> list[int]:
        return [len(p) for p in self.parts]

    def basis_matrix(self, i: int) -> np.ndarray:
        return coords_matrix(self.parts[i])

    def __repr__(self):
        return f"OrthogonalFiltration({self.algebra.name}, dims={self.dims})"

    def validate(self) -> ValidationReport:
        return validate(self)

    def projections(self) -> list[np.ndarray]:
        if self._projections is None:
            self._projections = projections(self)
        return self._projections


def _is_zero(x, tol=1e-10) -> bool:
    if isinstance(x, CycloNumber):
        return x.is_zero()
    return abs(x) <= tol


def validate(f: OrthogonalFiltration, tol: float = 1e-10) -> ValidationReport:
    report = ValidationReport()
    alg = f.algebra
    v0 = f.basis_matrix(0)
    unit = alg.unit if f.exact else linalg.to_complex(alg.unit)
    if linalg.rank(v0) != 1 or linalg.rank(np.column_stack([v0, unit])) != 1:
        report.violations.append(Violation("i", (0,), "part 0 does not span C*1"))
    for i, pi in enumerate(f.parts):
        for j, pj in enumerate(f.parts):
            if j <= i:
                continue
            for a_idx, a in enumerate(pi):
                for b_idx, b in enumerate(pj):
                    if not _is_zero(omega_pair(a, b), tol):
                        report.violations.append(
                            Violation("ii", (i, a_idx, j, b_idx), f"omega(a*b) != 0 between parts {i} and {j}")
                        )
    allv = np.column_stack([f.basis_matrix(i) for i in range(len(f.parts))])
    r = linalg.rank(allv)
    if r < alg.dim:
        report.violations.append(Violation("iii", (), f"parts span a subspace of dimension {r} < {alg.dim}"))
    if allv.shape[1] != r:
        report.violations.append(Violation("iii", (), "part vectors are linearly dependent"))
    if r == alg.dim:
        return report  # the full algebra is trivially *-closed
    for i, p in enumerate(f.parts):
        for a_idx, a in enumerate(p):
            s = star(a)
            sc = s.coords if s.exact and f.exact else linalg.to_complex(s.coords)
            if linalg.rank(np.column_stack([allv, sc])) > r:
                report.violations.append(Violation("iii", (i, a_idx), "span is not closed under *"))
    return report


def _require_valid(f: OrthogonalFiltration) -> None:
    rep = validate(f)
    if not rep.valid:
        raise FiltrationError("invalid filtration: " + "; ".join(v.message for v in rep.violations))


def projections(f: OrthogonalFiltration) -> list[np.ndarray]:
    """omega-orthogonal projections P_i = B (B^dag G B)^{-1} B^dag G in canonical coordinates."""
    _require_valid(f)
    g = f.algebra.gram if f.exact else f.algebra.gram_float
    out = []
    for i in range(len(f.parts)):
        b = f.basis_matrix(i)
        bd_g = linalg.matmul(linalg.dagger(b), g)
        small = linalg.matmul(bd_g, b)
        out.append(linalg.matmul(linalg.matmul(b, linalg.inverse(small)), bd_g))
    return out


# -- coloured matrices -------------------------------------------------------------


class ColoredMatrix:
    """A square matrix viewed as an edge colouring of the complete graph with loops.

    ``labels[i, j]`` is the colour index of entry (i, j) and ``palette[c]`` its value.
    Exact entries are compared by canonical equality; float entries are grouped
    into buckets of width ``tol`` and ``diameters`` records each bucket's spread.
    """

    def __init__(self, labels: np.ndarray, palette: list, values: np.ndarray | None = None,
                 diameters: list[float] | None = None):
        self.labels = np.asarray(labels, dtype=int)
        if self.labels.ndim != 2 or self.labels.shape[0] != self.labels.shape[1]:
            raise ValueError("coloured matrices must be square")
        self.palette = list(palette)
        self.values = values
        self.diameters = diameters or [0.0] * len(self.palette)

    @property
    def n(self) -> int:
        return self.labels.shape[0]

    @classmethod
    def from_matrix(cls, m: np.ndarray, tol: float = 1e-9, split_diagonal: bool = False) -> "ColoredMatrix":
        m = np.asarray(m)
        n = m.shape[0]
        labels = np.zeros(m.shape, dtype=int)
        palette: list = []
        diameters: list[float] = []
        if linalg.is_exact(m):
            order = math.lcm(*[v.order for v in m.flat]) if m.size else 1
            index: dict = {}
            for (i, j), v in np.ndenumerate(m):
                key = v.promote(order) if not v.is_rational() else v
                key = (i == j, key) if split_diagonal else key
                if key not in index:
                    index[key] = len(palette)
                    palette.append(key)
                    diameters.append(0.0)
                labels[i, j] = index[key]
        else:
            reps: list[tuple] = []
            members: list[list[complex]] = []
            for (i, j), v in np.ndenumerate(m.astype(complex)):
                diag = (i == j) if split_diagonal else None
                hit = None
                for c, (d, r) in enumerate(reps):
                    if d == diag and abs(v - r) <= tol:
                        hit = c
                        break
                if hit is None:
                    hit = len(reps)
                    reps.append((diag, v))
                    members.append([])
                    palette.append((diag, v) if split_diagonal else v)
                members[hit].append(v)
                labels[i, j] = hit
            diameters = [float(max(abs(a - b) for a in ms for b in ms)) for ms in members]
        return cls(labels.reshape(n, n), palette, m, diameters)

    @classmethod
    def joint(cls, matrices: Sequence["ColoredMatrix"]) -> "ColoredMatrix":
        """Common refinement: entry colour is the tuple of colours in each input."""
        if not matrices:
            raise ValueError("joint colouring of nothing")
        stacked = np.stack([m.labels for m in matrices], axis=-1)
        labels = np.zeros(stacked.shape[:2], dtype=int)
        index: dict = {}
        palette = []
        for (i, j), _ in np.ndenumerate(labels):
            key = tuple(int(x) for x in stacked[i, j])
            if key not in index:
                index[key] = len(palette)
                palette.append(tuple(m.palette[c] for m, c in zip(matrices, key)))
            labels[i, j] = index[key]
        return cls(labels, palette)

    def components(self) -> list[tuple[object, np.ndarray]]:
        return [(v, (self.labels == c).astype(int)) for c, v in enumerate(self.palette)]

    def position_partition(self) -> frozenset:
        """The partition of index pairs into colour classes, as a set of frozensets."""
        classes: dict[int, list] = {}
        for (i, j), c in np.ndenumerate(self.labels):
            classes.setdefault(int(c), []).append((i, j))
        return frozenset(frozenset(v) for v in classes.values())


def color_components(m, split_diagonal: bool = False, tol: float = 1e-9) -> list[tuple[object, np.ndarray]]:
    if not isinstance(m, ColoredMatrix):
        m = ColoredMatrix.from_matrix(m, tol=tol, split_diagonal=split_diagonal)
    return m.components()


def q_matrix(f: OrthogonalFiltration, weights: Sequence | None = None) -> np.ndarray:
    """Q = sum_i weights[i] P_i; distinct weights make Q's commutant that of all P_i."""
    k = len(f.parts)
    if weights is None:
        weights = list(range(k))
    if len(weights) != k:
        raise FiltrationError("one weight per part is required")
    ws = [CycloNumber.coerce(w) if not isinstance(w, float) else w for w in weights]
    if len(set(ws)) != k:
        raise FiltrationError("weights must be distinct")
    ps = f.projections()
    if all(linalg.is_exact(p) for p in ps) and not any(isinstance(w, float) for w in ws):
        out = linalg.exact_zeros(ps[0].shape)
        for w, p in zip(ws, ps):
            if w:
                out = out + np.array([[w * x for x in row] for row in p], dtype=object)
        return out
    return sum(complex(w) * linalg.to_complex(p) for w, p in zip(ws, ps))


# -- join ----------------------------------------------------------------------------


def join(f: OrthogonalFiltration, g: OrthogonalFiltration) -> OrthogonalFiltration:
    """Filtration by the nonzero intersections V_i & W_j, labelled (i, j)."""
    if f.algebra is not g.algebra:
        raise FiltrationError("join needs filtrations of the same algebra")
    alg = f.algebra
    parts, labels = [], []
    covered = [0] * len(f.parts)
    for i in range(len(f.parts)):
        bi = f.basis_matrix(i)
        for j in range(len(g.parts)):
            cj = g.basis_matrix(j)
            if not (linalg.is_exact(bi) and linalg.is_exact(cj)):
                bi, cj = linalg.to_complex(bi), linalg.to_complex(cj)
                neg = -cj
            else:
                neg = np.array([[-x for x in row] for row in cj], dtype=object).reshape(cj.shape)
            null = linalg.nullspace(np.column_stack([bi, neg]))
            if null.shape[1] == 0:
                continue
            inter = linalg.matmul(bi, null[: bi.shape[1]])
            inter = linalg.column_space(inter)
            parts.append([alg.element(inter[:, c].copy()) for c in range(inter.shape[1])])
            labels.append((f.labels[i], g.labels[j]))
            covered[i] += inter.shape[1]
    for i, c in enumerate(covered):
        if c != len(f.parts[i]):
            raise FiltrationError(f"part {f.labels[i]} is not the direct sum of its intersections")
    levels = list(range(len(parts)))
    out = OrthogonalFiltration(alg, parts, labels, levels)
    return out


# -- Van Daele-Wang parameter matrices -------------------------------------------


def vdw_parameter(f: OrthogonalFiltration, i: int, exact: bool = True) -> np.ndarray:
    """Q_i = conj(S) S^T where e_l* = sum_m S_lm f_m.

    (e_l) is the Gram-Schmidt orthonormalisation of the listed basis of V_i and
    (f_m) the Gram-Schmidt orthonormalisation of (e_l*) in the same order.
    Square roots are postponed to the end, so the result is exact whenever the
    inputs are exact and the remaining normalisation is rational.
    """
    _require_valid(f)
    u = orthogonalize(f.parts[i])
    us = [star(x) for x in u]
    v = orthogonalize(us)
    n = [omega_pair(x, x) for x in u]
    p = [omega_pair(x, x) for x in v]
    k = len(u)
    st = [[omega_pair(v[m], us[a]) for m in range(k)] for a in range(k)]
    all_exact = exact and all(isinstance(x, CycloNumber) for x in n + p + [s for row in st for s in row])
    if all_exact:
        out = linalg.exact_zeros((k, k))
        ok = True
        for a in range(k):
            for b in range(k):
                acc = CycloNumber.rational(0)
                for m in range(k):
                    acc = acc + st[a][m].conjugate() * st[b][m] / p[m]
                if acc.is_zero():
                    continue
                root = rational_sqrt(n[a] * n[b])
                if root is None:
                    ok = False
                    break
                out[a, b] = acc / CycloNumber.rational(root)
            if not ok:
                break
        if ok:
            return out
    out = np.zeros((k, k), dtype=complex)
    for a in range(k):
        for b in range(k):
            acc = sum(np.conj(complex(st[a][m])) * complex(st[b][m]) / complex(p[m]).real for m in range(k))
            out[a, b] = acc / math.sqrt(complex(n[a]).real * complex(n[b]).real)
    return out


# -- Dirac operator and spectral triple type ---------------------------------------------


@dataclass
class CommutatorEntry:
    element: int
    pi: np.ndarray
    commutator: np.ndarray
    norm: float


@dataclass
class DiracReport:
    dirac: np.ndarray
    entries: list[CommutatorEntry]
    levels: list[int]

    def norms(self) -> list[float]:
        return [e.norm for e in self.entries]


def _scale(m: np.ndarray, c) -> np.ndarray:
    if linalg.is_exact(m):
        return np.array([[c * x for x in row] for row in m], dtype=object).reshape(m.shape)
    return complex(c) * m


def _gns_norm(x: np.ndarray, gram: np.ndarray) -> float:
    w, vecs = np.linalg.eigh(gram)
    root = vecs @ np.diag(np.sqrt(w)) @ vecs.conj().T
    inv_root = vecs @ np.diag(1 / np.sqrt(w)) @ vecs.conj().T
    return float(np.linalg.norm(root @ linalg.to_complex(x) @ inv_root, 2))


def dirac_operator(f: OrthogonalFiltration, levels: Sequence[int] | None = None) -> DiracReport:
    """D = sum level_i P_i and [D, pi(e_j)] for every basis element e_j.

    pi(a) is left multiplication; commutator norms are operator norms on the
    GNS space, i.e. with respect to <x, y> = omega(x* y).
    """
    levels = list(levels) if levels is not None else list(f.levels)
    ps = f.projections()
    alg = f.algebra
    d = None
    for lev, p in zip(levels, ps):
        term = _scale(p, lev)
        d = term if d is None else d + term
    gram = alg.gram_float
    entries = []
    for j in range(alg.dim):
        a = alg.basis_element(j)
        pi = alg.left_multiplication(a)
        if not linalg.is_exact(d):
            pi = linalg.to_complex(pi)
        comm = linalg.matmul(d, pi) - linalg.matmul(pi, d)
        entries.append(CommutatorEntry(j, pi, comm, _gns_norm(comm, gram)))
    return DiracReport(d, entries, levels)


def _bound(m, k: int) -> int:
    return m[k] if isinstance(m, Mapping) or isinstance(m, (list, tuple)) else int(m)


def band_violation(f: OrthogonalFiltration, m) -> float:
    """max |P_n pi(a) P_m| over a in V_k and parts with |level_n - level_m| > M_k.

    Zero (exactly, for exact filtrations) when the filtration is of spectral
    triple type with bound ``m``.
    """
    ps = f.projections()
    worst = 0.0
    for k, part in enumerate(f.parts):
        bound = _bound(m, k)
        for a in part:
            pi = f.algebra.left_multiplication(a)
            for n_idx, pn in enumerate(ps):
                for m_idx, pm in enumerate(ps):
                    if abs(f.levels[n_idx] - f.levels[m_idx]) <= bound:
                        continue
                    block = linalg.matmul(linalg.matmul(pn, pi), pm)
                    if linalg.is_exact(block):
                        if not linalg.is_zero_matrix(block):
                            worst = max(worst, linalg.max_abs(block), 1e-300)
                    else:
                        worst = max(worst, linalg.max_abs(block))
    return worst


@dataclass
class TypeCheck:
    ok: bool
    witness: tuple | None = None  # (kind, k, l) with kind "VV" or "V*V"
    violations: list[tuple] = field(default_factory=list)


def spectral_triple_type_check(f: OrthogonalFiltration, m) -> TypeCheck:
    """Check V_k V_l and V_k* V_l lie in the span of parts of level <= level(l) + M_k.

    ``m`` is one bound for every k or a per-part sequence/mapping.  Membership is
    checked in the span of those parts, not in their set-theoretic union.
    """
    ps = f.projections()
    exact = all(linalg.is_exact(p) for p in ps)
    n = f.algebra.dim
    violations = []
    for k, pk in enumerate(f.parts):
        bound = _bound(m, k)
        for l, pl in enumerate(f.parts):
            high = [j for j in range(len(f.parts)) if f.levels[j] > f.levels[l] + bound]
            if not high:
                continue
            h = ps[high[0]]
            for j in high[1:]:
                h = h + ps[j]
            for kind in ("VV", "V*V"):
                bad = False
                for a in pk:
                    left = star(a) if kind == "V*V" else a
                    for b in pl:
                        x = multiply(left, b).coords
                        if exact and x.dtype == object:
                            if not linalg.is_zero_matrix(linalg.matmul(h, x).reshape(n, 1)):
                                bad = True
                        elif linalg.max_abs(linalg.to_complex(h) @ linalg.to_complex(x)) > 1e-9:
                            bad = True
                        if bad:
                            break
                    if bad:
                        break
                if bad:
                    violations.append((kind, k, l))
    return TypeCheck(not violations, violations[0] if violations else None, violations)
