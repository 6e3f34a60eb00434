"""Numerical checks for matrices with operator entries.

An :class:`OperatorMatrix` holds a d x d array of m x m complex matrices as one
array of shape (d, d, m, m).  For d = 2n the outer indices are labelled by
pairs (i, k) with i in {1, -1} and k in 1..n, ordered (1,1)..(1,n), (-1,1)..(-1,n);
the bar involution flips i.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

DEFAULT_TOL = 1e-9

Label = tuple[int, int]


class VerifierError(ValueError):
    pass


def j_labels(n: int) -> list[Label]:
    return [(1, k) for k in range(1, n + 1)] + [(-1, k) for k in range(1, n + 1)]


def bar(x: Label) -> Label:
    return (-x[0], x[1])


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    entries: np.ndarray
    labels: tuple | None = None
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        if e.ndim == 2:
            e = e[:, :, None, None]
        if e.ndim != 4 or e.shape[0] != e.shape[1] or e.shape[2] != e.shape[3]:
            raise VerifierError(f"entries must have shape (d, d, m, m), got {e.shape}")
        object.__setattr__(self, "entries", e)
        if self.labels is not None:
            labels = tuple(tuple(x) if isinstance(x, (list, tuple)) else x for x in self.labels)
            if len(labels) != e.shape[0]:
                raise VerifierError("one label per outer index is required")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_scalar(cls, m, jn: bool = True, tol: float = DEFAULT_TOL) -> "OperatorMatrix":
        m = np.asarray(m, dtype=complex)
        d = m.shape[0]
        labels = j_labels(d // 2) if jn and d % 2 == 0 else None
        return cls(m[:, :, None, None], labels, tol)

    @classmethod
    def from_blocks(cls, blocks, jn: bool = True, tol: float = DEFAULT_TOL) -> "OperatorMatrix":
        e = np.asarray(blocks, dtype=complex)
        d = e.shape[0]
        labels = j_labels(d // 2) if jn and d % 2 == 0 else None
        return cls(e, labels, tol)

    @property
    def d(self) -> int:
        return self.entries.shape[0]

    @property
    def m(self) -> int:
        return self.entries.shape[2]

    @property
    def n(self) -> int:
        return self.d // 2

    def __getitem__(self, key) -> np.ndarray:
        x, y = key
        return self.entries[self.index(x), self.index(y)]

    def index(self, x) -> int:
        if isinstance(x, (int, np.integer)):
            return int(x)
        if self.labels is None:
            raise VerifierError("matrix has no labels")
        return self.labels.index(tuple(x))

    def flat(self) -> np.ndarray:
        """(d m) x (d m) matrix, outer index major."""
        d, m = self.d, self.m
        return self.entries.transpose(0, 2, 1, 3).reshape(d * m, d * m)

    @classmethod
    def from_flat(cls, mat: np.ndarray, d: int, labels=None, tol=DEFAULT_TOL) -> "OperatorMatrix":
        m = mat.shape[0] // d
        return cls(mat.reshape(d, m, d, m).transpose(0, 2, 1, 3), labels, tol)

    def with_tol(self, tol: float) -> "OperatorMatrix":
        return OperatorMatrix(self.entries, self.labels, tol)

    def conjugate_by(self, w: np.ndarray) -> "OperatorMatrix":
        """Entries E -> W E W^dag for a unitary W."""
        e = np.einsum("ab,xybc,dc->xyad", w, self.entries, w.conj())
        return OperatorMatrix(e, self.labels, self.tol)

    def bar_index(self) -> list[int]:
        if self.labels is None or self.d % 2:
            raise VerifierError("bar involution needs labels of the form (i, k)")
        try:
            return [self.labels.index(bar(x)) for x in self.labels]
        except ValueError as exc:
            raise VerifierError("labels are not closed under the bar involution") from exc


# -- norms and reports ---------------------------------------------------------------


def _spec(a: np.ndarray) -> float:
    """Largest spectral norm over a stack of matrices (or of one matrix)."""
    if a.size == 0:
        return 0.0
    if a.ndim == 2:
        return float(np.linalg.norm(a, 2))
    flat = a.reshape(-1, a.shape[-2], a.shape[-1])
    return float(np.linalg.svd(flat, compute_uv=False).max())


def _frob(a: np.ndarray) -> float:
    if a.size == 0:
        return 0.0
    flat = a.reshape(-1, a.shape[-2], a.shape[-1])
    return float(np.sqrt((np.abs(flat) ** 2).sum(axis=(1, 2))).max())


def _dag(e: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(e, -1, -2))


@dataclass
class Check:
    ok: bool
    violation: float
    frobenius: float = 0.0

    def __bool__(self):
        return self.ok


def _check(diff: np.ndarray, tol: float) -> Check:
    v = _spec(diff)
    return Check(v <= tol, v, _frob(diff))


@dataclass
class RelationReport:
    flags: dict[str, bool] = field(default_factory=dict)
    violations: dict[str, float] = field(default_factory=dict)
    frobenius: dict[str, float] = field(default_factory=dict)

    def add(self, name: str, c: Check) -> None:
        self.flags[name] = c.ok
        self.violations[name] = c.violation
        self.frobenius[name] = c.frobenius

    @property
    def ok(self) -> bool:
        return all(self.flags.values())

    def __getitem__(self, name):
        return self.flags[name]


# -- basic checks -----------------------------------------------------------------------


def is_block_unitary(u: OperatorMatrix) -> Check:
    f = u.flat()
    eye = np.eye(f.shape[0])
    a = _spec(f.conj().T @ f - eye)
    b = _spec(f @ f.conj().T - eye)
    return Check(max(a, b) <= u.tol, max(a, b), max(_frob(f.conj().T @ f - eye), _frob(f @ f.conj().T - eye)))


def is_magic_unitary(u: OperatorMatrix) -> Check:
    e = u.entries
    eye = np.eye(u.m)
    viol = [
        _spec(e - _dag(e)),
        _spec(e @ e - e),
        _spec(e.sum(axis=1) - eye),
        _spec(e.sum(axis=0) - eye),
    ]
    v = max(viol)
    return Check(v <= u.tol, v)


def normality(u: OperatorMatrix) -> Check:
    e = u.entries
    return _check(e @ _dag(e) - _dag(e) @ e, u.tol)


def partial_isometry(u: OperatorMatrix) -> Check:
    e = u.entries
    return _check(e @ _dag(e) @ e - e, u.tol)


def bar_symmetry(u: OperatorMatrix) -> Check:
    """U_{x, y}* = U_{bar x, bar y}."""
    b = u.bar_index()
    e = u.entries
    return _check(_dag(e) - e[np.ix_(b, b)], u.tol)


def block2(u: OperatorMatrix) -> Check:
    """U_{j s, x} U_{l k, x} = 0 whenever s != k."""
    if u.labels is None:
        raise VerifierError("block2 needs labels of the form (i, k)")
    e = u.entries
    worst, frob = 0.0, 0.0
    kappa = [x[1] for x in u.labels]
    for a, b in itertools.product(range(u.d), repeat=2):
        if kappa[a] == kappa[b]:
            continue
        prod = e[a] @ e[b]  # stack over the column index x
        worst = max(worst, _spec(prod))
        frob = max(frob, _frob(prod))
    return Check(worst <= u.tol, worst, frob)


def range_projections(u: OperatorMatrix) -> OperatorMatrix:
    e = u.entries
    return OperatorMatrix(e @ _dag(e), u.labels, u.tol)


def check_hplus_relations(u: OperatorMatrix) -> RelationReport:
    u.bar_index()
    rep = RelationReport()
    rep.add("partial_isometry", partial_isometry(u))
    rep.add("bar_symmetry", bar_symmetry(u))
    rep.add("unitary", is_block_unitary(u))
    return rep


def check_kplus_relations(u: OperatorMatrix) -> RelationReport:
    u.bar_index()
    rep = RelationReport()
    rep.add("bar_symmetry", bar_symmetry(u))
    pi = partial_isometry(u)
    nm = normality(u)
    rep.add("normal_partial_isometry", Check(pi.ok and nm.ok, max(pi.violation, nm.violation),
                                            max(pi.frobenius, nm.frobenius)))
    rep.add("range_magic", is_magic_unitary(range_projections(u)))
    rep.add("unitary", is_block_unitary(u))
    rep.add("block2", block2(u))
    return rep


# -- tensor powers and intertwiners -------------------------------------------------------


def tensor_power(u: OperatorMatrix, k: int) -> OperatorMatrix:
    """Entry ((x1..xk), (y1..yk)) is the product U_{x1 y1} ... U_{xk yk}."""
    if k < 1:
        raise VerifierError("tensor power needs k >= 1")
    e = u.entries
    d, m = u.d, u.m
    out = e
    for _ in range(k - 1):
        out = np.einsum("xyab,zwbc->xzywac", out, e).reshape(out.shape[0] * d, out.shape[1] * d, m, m)
    labels = None
    if u.labels is not None:
        labels = tuple(itertools.product(u.labels, repeat=k)) if k > 1 else u.labels
    return OperatorMatrix(out, labels, u.tol)


def _contract_right(t: np.ndarray, e: np.ndarray, k: int, l: int) -> np.ndarray:
    """(T x I) U^{(x)k} for a stack of T, as an array (P, d^l, d^k, m, m), one leg at a time."""
    d, m = e.shape[0], e.shape[2]
    p = t.shape[0]
    a = np.broadcast_to(t[..., None, None] * np.eye(m), t.shape + (m, m))
    for j in range(k):
        # axes: (stack and done outputs, current x, remaining x, m, m)
        a = a.reshape(p * d**l * d**j, d, d ** (k - j - 1), m, m)
        a = np.tensordot(a, e, axes=([1, 4], [0, 2])).transpose(0, 3, 1, 2, 4)
    return a.reshape(p, d**l, d**k, m, m)


def _contract_left(t: np.ndarray, e: np.ndarray, k: int, l: int) -> np.ndarray:
    """U^{(x)l} (T x I) for a stack of T, contracting the last output leg first."""
    d, m = e.shape[0], e.shape[2]
    p = t.shape[0]
    b = np.broadcast_to(t[..., None, None] * np.eye(m), t.shape + (m, m))
    for j in range(l):
        # axes: (stack and remaining z, current z, done outputs and the d^k inputs, m, m)
        b = b.reshape(p * d ** (l - j - 1), d, d**j * d**k, m, m)
        b = np.tensordot(b, e, axes=([1, 3], [1, 3])).transpose(0, 3, 1, 4, 2)
    return b.reshape(p, d**l, d**k, m, m)


def intertwiner_checks(ts: Sequence[np.ndarray], u: OperatorMatrix, k: int, l: int,
                       tol: float | None = None, chunk: int = 1 << 22) -> list[Check]:
    """intertwiner_check for many T of the same shape, contracted in batches."""
    tol = u.tol if tol is None else tol
    d, m = u.d, u.m
    ts = [np.asarray(t, dtype=complex) for t in ts]
    for t in ts:
        if t.shape != (d**l, d**k):
            raise VerifierError(f"T must have shape {(d**l, d**k)}, got {t.shape}")
    per = max(1, d**k * d**l * m * m * max(d, 1))
    step = max(1, chunk // per)
    out = []
    for s in range(0, len(ts), step):
        block = np.stack(ts[s:s + step])
        diff = _contract_right(block, u.entries, k, l) - _contract_left(block, u.entries, k, l)
        diff = diff.transpose(0, 1, 3, 2, 4).reshape(len(block), d**l * m, d**k * m)
        frobs = np.linalg.norm(diff.reshape(len(block), -1), axis=1) if diff.size else np.zeros(len(block))
        for i, fr in enumerate(frobs):
            fr = float(fr)
            if fr <= tol:
                out.append(Check(True, fr, fr))
            else:
                v = _spec(diff[i])
                out.append(Check(v <= tol, v, fr))
    return out


def intertwiner_check(t: np.ndarray, u: OperatorMatrix, k: int, l: int,
                      tol: float | None = None) -> Check:
    """|| (T x I) U^{(x)k} - U^{(x)l} (T x I) || for T : (C^d)^{(x)k} -> (C^d)^{(x)l}.

    The violation is the spectral norm of the difference, except that when its
    Frobenius norm is already within ``tol`` that (larger) bound is reported.
    """
    return intertwiner_checks([t], u, k, l, tol)[0]


def lemma_t_operator(n: int) -> np.ndarray:
    """T(e_z (x) e_x) = delta_{z, bar x} e_{bar z} (x) e_z on C^{2n} (x) C^{2n}."""
    labels = j_labels(n)
    d = 2 * n
    idx = {x: i for i, x in enumerate(labels)}
    t = np.zeros((d * d, d * d))
    for z in labels:
        x = bar(z)
        t[idx[bar(z)] * d + idx[z], idx[z] * d + idx[x]] = 1
    return t


@dataclass
class LemmaReport:
    intertwiner: Check
    normal: Check
    block2: Check

    @property
    def flags(self) -> tuple[bool, bool, bool]:
        return (self.intertwiner.ok, self.normal.ok, self.block2.ok)

    @property
    def agree(self) -> bool:
        return len(set(self.flags)) == 1


def lemma52_suite(u: OperatorMatrix, check_precondition: bool = True) -> LemmaReport:
    """Intertwiner of the pair-swap T, normality of entries, and the block-2 products."""
    if check_precondition:
        rep = check_hplus_relations(u)
        if not rep.ok:
            raise VerifierError(f"matrix does not satisfy the H+ relations: {rep.violations}")
    t = lemma_t_operator(u.n)
    return LemmaReport(intertwiner_check(t, u, 2, 2), normality(u), block2(u))


# -- Hopf structure maps -----------------------------------------------------------------


def tensor_composite(u: OperatorMatrix, v: OperatorMatrix) -> OperatorMatrix:
    """W_{x,y} = sum_z U_{x,z} (x) V_{z,y}."""
    if u.d != v.d:
        raise VerifierError("outer dimensions differ")
    if u.labels != v.labels:
        raise VerifierError("label schemes differ")
    w = np.einsum("xzab,zycd->xyacbd", u.entries, v.entries)
    m = u.m * v.m
    return OperatorMatrix(w.reshape(u.d, u.d, m, m), u.labels, u.tol)


def antipode_transform(u: OperatorMatrix) -> OperatorMatrix:
    """U_{x,y} -> U_{y,x}*."""
    return OperatorMatrix(_dag(u.entries).transpose(1, 0, 2, 3), u.labels, u.tol)


def counit_transform(u: OperatorMatrix) -> OperatorMatrix:
    """U_{x,y} -> delta_{x,y} 1, a scalar matrix."""
    return OperatorMatrix(np.eye(u.d)[:, :, None, None], u.labels, u.tol)


# -- actions on free group algebras -----------------------------------------------------------


def _letter_coefficients(u: OperatorMatrix, group, f: int, sign: int) -> dict:
    """alpha(gamma_f^sign) = sum_{i s} gamma_s^i (x) U_{i s, sign f}; the inverse letter is the adjoint."""
    n = u.n
    out = {}
    col = u.index((1, f + 1))
    for i, s in j_labels(n):
        op = u.entries[u.index((i, s)), col]
        word = group.reduce([(s - 1, i)])
        if sign == 1:
            out[word] = op
        else:
            out[group.inverse(word)] = op.conj().T
    return out


def induced_action_coefficients(u: OperatorMatrix, word, ball: Sequence | None = None) -> dict:
    """Coefficients f_w(alpha(v)) in C[F_n] (x) B(H), indexed by reduced words w.

    ``ball`` restricts the allowed support; any coefficient of norm above the
    tolerance landing outside it raises, since length preservation is checked,
    not assumed.
    """
    group = word.group
    if any(group.factors[f].kind != "infinite" for f in range(len(group.factors))):
        raise VerifierError("induced actions are defined on free groups")
    if len(group.factors) != u.n:
        raise VerifierError("number of free generators must equal n")
    eye = np.eye(u.m, dtype=complex)
    current = {group.identity(): eye}
    letters: dict = {}
    for f, x in word.blocks:
        sign = 1 if x > 0 else -1
        if (f, sign) not in letters:
            letters[(f, sign)] = _letter_coefficients(u, group, f, sign)
        for _ in range(abs(x)):
            nxt: dict = {}
            for w1, a in current.items():
                for w2, b in letters[(f, sign)].items():
                    w = group.multiply(w1, w2)
                    prod = a @ b
                    if w in nxt:
                        nxt[w] = nxt[w] + prod
                    else:
                        nxt[w] = prod
            current = {w: op for w, op in nxt.items() if np.abs(op).max() > 1e-15}
    if ball is not None:
        allowed = set(ball)
        for w, op in current.items():
            if w not in allowed and _spec(op) > u.tol:
                raise VerifierError(f"coefficient at {w} escapes the ball")
    return current


def partition_preservation_check(u: OperatorMatrix, ball: Sequence, mode: str = "shape") -> Check:
    """max |f_w(alpha(v))| over v, w in the ball with different partition keys."""
    from .free_words import partition_by

    key_of = {}
    for key, words in partition_by(ball, mode).items():
        for w in words:
            key_of[w] = key
    worst = 0.0
    for v in ball:
        coeffs = induced_action_coefficients(u, v, ball)
        for w, op in coeffs.items():
            if key_of.get(w) != key_of[v]:
                worst = max(worst, _spec(op))
    return Check(worst <= u.tol, worst)


# -- actions on C^n ---------------------------------------------------------------------


def permutation_operator_matrix(perm: Sequence[int], tol: float = DEFAULT_TOL) -> OperatorMatrix:
    """alpha(e_l) = e_{perm[l]}: U_{k l} = [k = perm[l]]."""
    n = len(perm)
    m = np.zeros((n, n))
    for l, k in enumerate(perm):
        m[k, l] = 1
    return OperatorMatrix(m[:, :, None, None], None, tol)


@dataclass
class PreservationReport:
    filtration: Check
    state: Check

    @property
    def ok(self) -> bool:
        return self.filtration.ok and self.state.ok


def filtration_preservation_check(u, f, tol: float | None = None) -> PreservationReport:
    """alpha(e_l) = sum_k e_k (x) U_{kl} preserves each part and the state.

    ``u`` is an OperatorMatrix or a permutation of the basis.
    """
    from . import linalg

    if not isinstance(u, OperatorMatrix):
        u = permutation_operator_matrix(u)
    tol = u.tol if tol is None else tol
    if u.d != f.algebra.dim:
        raise VerifierError("operator matrix size differs from the algebra dimension")
    big = u.flat()
    eye = np.eye(u.m)
    ps = [np.kron(linalg.to_complex(p), eye) for p in f.projections()]
    worst = 0.0
    for i, pi in enumerate(ps):
        for j, pj in enumerate(ps):
            if i != j:
                worst = max(worst, _spec(pj @ big @ pi))
    w = linalg.to_complex(f.algebra.state)
    state = np.einsum("k,klab->lab", w, u.entries) - w[:, None, None] * eye
    sv = _spec(state)
    return PreservationReport(Check(worst <= tol, worst), Check(sv <= tol, sv))


def column_sum_condition(u: OperatorMatrix, groups: Sequence[tuple[Sequence[int], int]]) -> Check:
    """Sums sum_{i in rows} U_{i, col} for each (rows, col) must all coincide."""
    sums = [u.entries[list(rows), col].sum(axis=0) for rows, col in groups]
    diffs = np.stack([s - sums[0] for s in sums])
    return _check(diffs, u.tol)


def s3_sum_condition(u: OperatorMatrix) -> Check:
    """p11+p21+p31 = p12+p22+p32 = p13+p23+p33 = p44+p45+p46 = p54+p55+p56 = p64+p65+p66."""
    e = u.entries
    sums = [e[0:3, c].sum(axis=0) for c in range(3)] + [e[r, 3:6].sum(axis=0) for r in range(3, 6)]
    diffs = np.stack([s - sums[0] for s in sums])
    return _check(diffs, u.tol)
