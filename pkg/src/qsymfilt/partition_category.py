"""Coloured noncrossing partitions and their linear maps on tensor powers of C^{2n}.

Points 0..k-1 are the upper legs (left to right), k..k+l-1 the lower legs (left
to right).  Crossings are tested in the boundary order: upper left to right,
then lower right to left.
"""

from __future__ import annotations

import functools
import itertools
import os
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from .op_verifier import OperatorMatrix, bar, intertwiner_checks, j_labels, tensor_power

WHITE, BLACK = "w", "b"


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class ColoredNoncrossingPartition:
    k: int
    l: int
    blocks: tuple[tuple[int, ...], ...]
    colors: str

    def __post_init__(self):
        pts = sorted(p for b in self.blocks for p in b)
        if pts != list(range(self.k + self.l)):
            raise PartitionError("blocks must partition the k + l points")
        if len(self.colors) != self.k + self.l or set(self.colors) - {WHITE, BLACK}:
            raise PartitionError("one colour in {w, b} per point is required")
        blocks = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        object.__setattr__(self, "blocks", blocks)
        if not is_noncrossing(blocks, self.k, self.l):
            raise PartitionError("partition is crossing")

    @property
    def size(self) -> int:
        return self.k + self.l

    def is_upper(self, p: int) -> bool:
        return p < self.k

    def to_dict(self) -> dict:
        return {"k": self.k, "l": self.l, "blocks": [list(b) for b in self.blocks], "colors": self.colors}

    @classmethod
    def from_dict(cls, d: dict) -> "ColoredNoncrossingPartition":
        return cls(int(d["k"]), int(d["l"]), tuple(tuple(b) for b in d["blocks"]), d["colors"])

    def render(self) -> str:
        """Two-row sketch: block letters above and below."""
        names = {}
        for i, b in enumerate(self.blocks):
            for p in b:
                names[p] = chr(ord("A") + i)
        top = " ".join(f"{names[p]}{self.colors[p]}" for p in range(self.k))
        bot = " ".join(f"{names[p]}{self.colors[p]}" for p in range(self.k, self.size))
        return f"upper: {top or '-'}\nlower: {bot or '-'}"


def boundary_position(p: int, k: int, l: int) -> int:
    return p if p < k else k + (k + l - 1 - p)


def is_noncrossing(blocks, k: int, l: int) -> bool:
    pos = [[boundary_position(p, k, l) for p in b] for b in blocks]
    for a, b in itertools.combinations(pos, 2):
        for (p1, p2) in itertools.combinations(sorted(a), 2):
            for (q1, q2) in itertools.combinations(sorted(b), 2):
                if p1 < q1 < p2 < q2 or q1 < p1 < q2 < p2:
                    return False
    return True


def set_partitions(n: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All set partitions of range(n) via restricted growth strings."""
    if n == 0:
        yield ()
        return

    def rgs(prefix, top):
        if len(prefix) == n:
            blocks: dict[int, list[int]] = {}
            for p, c in enumerate(prefix):
                blocks.setdefault(c, []).append(p)
            yield tuple(tuple(b) for b in blocks.values())
            return
        for c in range(top + 2):
            yield from rgs(prefix + [c], max(top, c))

    yield from rgs([0], 0)


def noncrossing_partitions(k: int, l: int) -> list[tuple[tuple[int, ...], ...]]:
    return [b for b in set_partitions(k + l) if is_noncrossing(b, k, l)]


def balanced_predicate(p: ColoredNoncrossingPartition) -> bool:
    """In every block: signed white count = signed black count (+ upper, - lower)."""
    for b in p.blocks:
        total = 0
        for q in b:
            s = 1 if p.is_upper(q) else -1
            total += s if p.colors[q] == WHITE else -s
        if total:
            return False
    return True


def pair_predicate(p: ColoredNoncrossingPartition) -> bool:
    return all(len(b) == 2 for b in p.blocks)


def enumerate_partitions(k: int, l: int, predicate: Callable | None = balanced_predicate,
                         colored: bool = True, max_points: int | None = None) -> list:
    """Noncrossing partitions of k + l points; with ``colored`` all colourings filtered by ``predicate``."""
    limit = max_points if max_points is not None else 8
    if k + l > limit:
        raise PartitionError(f"k + l = {k + l} exceeds the limit {limit}")
    cap = int(os.environ.get("QSG_MAX_SIZE", 10**6))
    shapes = noncrossing_partitions(k, l)
    if not colored:
        return shapes
    out = []
    for blocks in shapes:
        for cols in itertools.product(WHITE + BLACK, repeat=k + l):
            p = ColoredNoncrossingPartition(k, l, blocks, "".join(cols))
            if predicate is None or predicate(p):
                out.append(p)
                if len(out) > cap:
                    raise PartitionError("enumeration exceeds QSG_MAX_SIZE")
    return out


def delta(p: ColoredNoncrossingPartition, upper: Sequence, lower: Sequence) -> bool:
    """Within a block, same colour legs carry equal labels and opposite colours bar-related labels."""
    labels = list(upper) + list(lower)
    for b in p.blocks:
        ref = b[0]
        for q in b[1:]:
            want = labels[ref] if p.colors[q] == p.colors[ref] else bar(labels[ref])
            if labels[q] != want:
                return False
    return True


def t_pi(p: ColoredNoncrossingPartition, n: int) -> np.ndarray:
    """Matrix (2n)^l x (2n)^k of e_i -> sum_j delta_p(i, j) e_j, first tensor factor major."""
    return _t_pi_cached(p, n).copy()


@functools.lru_cache(maxsize=4096)
def _t_pi_cached(p: ColoredNoncrossingPartition, n: int) -> np.ndarray:
    labels = j_labels(n)
    d = len(labels)
    out = np.zeros((d**p.l, d**p.k))
    # enumerate label assignments block by block instead of all (2n)^(k+l) tuples
    choices = []
    for b in p.blocks:
        choices.append([(b, x) for x in labels])
    for assign in itertools.product(*choices):
        vals = [None] * p.size
        for b, x in assign:
            ref = b[0]
            for q in b:
                vals[q] = x if p.colors[q] == p.colors[ref] else bar(x)
        col = 0
        for q in range(p.k):
            col = col * d + labels.index(vals[q])
        row = 0
        for q in range(p.k, p.size):
            row = row * d + labels.index(vals[q])
        out[row, col] = 1
    return out


def t_pi_bruteforce(p: ColoredNoncrossingPartition, n: int) -> np.ndarray:
    labels = j_labels(n)
    d = len(labels)
    out = np.zeros((d**p.l, d**p.k))
    for ci, up in enumerate(itertools.product(labels, repeat=p.k)):
        for ri, low in enumerate(itertools.product(labels, repeat=p.l)):
            if delta(p, up, low):
                out[ri, ci] = 1
    return out


def lemma_partition() -> ColoredNoncrossingPartition:
    """The 4-leg block whose map is e_z (x) e_x -> delta_{z, bar x} e_{bar z} (x) e_z."""
    # upper legs (z, x) = (w, b); lower legs (bar z, z) = (b, w)
    return ColoredNoncrossingPartition(2, 2, ((0, 1, 2, 3),), "wbbw")


# -- composition -----------------------------------------------------------------------------


def compose(top: ColoredNoncrossingPartition, bottom: ColoredNoncrossingPartition):
    """Stack ``top`` (k -> l) above ``bottom`` (l -> m); returns (partition, number of loops).

    Middle points must have matching colours.  t_pi(result) * (2n)^loops equals
    t_pi(bottom) @ t_pi(top).
    """
    if top.l != bottom.k:
        raise PartitionError("middle point counts differ")
    for i in range(top.l):
        if top.colors[top.k + i] != bottom.colors[i]:
            raise PartitionError("middle colours do not match")
    k, mid, m = top.k, top.l, bottom.l
    # nodes: upper of top 0..k-1, middle k..k+mid-1, lower of bottom k+mid..
    parent = list(range(k + mid + m))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    for b in top.blocks:
        for q in b[1:]:
            union(b[0], q)
    for b in bottom.blocks:
        nodes = [k + q for q in b]
        for q in nodes[1:]:
            union(nodes[0], q)
    groups: dict[int, list[int]] = {}
    for x in range(k + mid + m):
        groups.setdefault(find(x), []).append(x)
    blocks, loops = [], 0
    for g in groups.values():
        outer = [x if x < k else x - mid for x in g if x < k or x >= k + mid]
        if outer:
            blocks.append(tuple(sorted(outer)))
        else:
            loops += 1
    colors = top.colors[:k] + bottom.colors[mid:]
    return ColoredNoncrossingPartition(k, m, tuple(blocks), colors), loops


# -- intertwiner span check ---------------------------------------------------------------------


@dataclass
class SpanReport:
    passed: list[bool]
    violations: list[float]
    rank: int
    solution_dim: int | None

    @property
    def all_pass(self) -> bool:
        return all(self.passed)


def span_containment_check(partitions: Sequence[ColoredNoncrossingPartition], u: OperatorMatrix,
                           k: int, l: int, tol: float = 1e-8, max_unknowns: int = 1024) -> SpanReport:
    """Check each T_pi intertwines U^{(x)k} and U^{(x)l}; report rank of {T_pi} and
    the dimension of the full solution space when it is small enough to compute."""
    n = u.n
    if any((p.k, p.l) != (k, l) for p in partitions):
        raise PartitionError("partition has the wrong number of legs")
    ts = [_t_pi_cached(p, n) for p in partitions]
    checks = intertwiner_checks(ts, u, k, l, tol)
    passed = [c.ok for c in checks]
    viol = [c.violation for c in checks]
    mats = [t.ravel() for t in ts]
    rank = 0
    if mats:
        s = np.linalg.svd(np.array(mats), compute_uv=False)
        rank = int(np.sum(s > 1e-7 * s[0])) if s[0] > 0 else 0
    d = u.d
    unknowns = d ** (k + l)
    sol = None
    if unknowns <= max_unknowns:
        sol = _solution_dimension(u, k, l)
    return SpanReport(passed, viol, rank, sol)


def _solution_dimension(u: OperatorMatrix, k: int, l: int) -> int:
    """dim{T : (T x I) U^k = U^l (T x I)} by a nullspace computation."""
    d, m = u.d, u.m
    uk = tensor_power(u, k).flat() if k else np.eye(m)
    ul = tensor_power(u, l).flat() if l else np.eye(m)
    rows, cols = d**l, d**k
    eqs = []
    for idx in range(rows * cols):
        t = np.zeros(rows * cols)
        t[idx] = 1
        tt = np.kron(t.reshape(rows, cols), np.eye(m))
        eqs.append((tt @ uk - ul @ tt).ravel())
    a = np.array(eqs).T
    s = np.linalg.svd(a, compute_uv=False)
    top = s[0] if s.size and s[0] > 0 else 1.0
    return int(rows * cols - np.sum(s > 1e-7 * top))
