"""Permutations commuting with a coloured matrix, by individualisation and refinement."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .filtration import ColoredMatrix


Perm = tuple[int, ...]


def compose(p: Perm, q: Perm) -> Perm:
    """(p q)(x) = p(q(x))."""
    return tuple(p[x] for x in q)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


@dataclass
class PermGroup:
    degree: int
    generators: list[Perm]
    order: int
    base: list[int] = field(default_factory=list)
    orbit_sizes: list[int] = field(default_factory=list)

    def elements(self, limit: int = 8) -> set[Perm]:
        """All elements by closure; only for small degrees."""
        if self.degree > limit:
            raise ValueError(f"explicit enumeration limited to degree {limit}")
        ident = tuple(range(self.degree))
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for g in frontier:
                for s in self.generators:
                    h = compose(s, g)
                    if h not in seen:
                        seen.add(h)
                        nxt.append(h)
            frontier = nxt
        return seen

    def contains(self, p: Perm) -> bool:
        return tuple(p) in self.elements(limit=self.degree)


def _labels(m) -> np.ndarray:
    if isinstance(m, ColoredMatrix):
        return m.labels
    arr = np.asarray(m)
    if arr.dtype.kind in "iu":
        return arr
    return ColoredMatrix.from_matrix(arr).labels


def is_color_automorphism(m, sigma: Sequence[int]) -> bool:
    lab = _labels(m)
    n = lab.shape[0]
    sigma = np.asarray(sigma, dtype=int)
    if sigma.shape != (n,):
        raise ValueError("permutation degree does not match the matrix")
    if sorted(sigma.tolist()) != list(range(n)):
        raise ValueError("not a permutation")
    return bool(np.array_equal(lab[np.ix_(sigma, sigma)], lab))


class _Search:
    def __init__(self, lab: np.ndarray):
        self.lab = lab
        self.n = lab.shape[0]
        self.rows = [[(int(lab[v, w]), int(lab[w, v])) for w in range(self.n)] for v in range(self.n)]

    def refine(self, ca: list[int], cb: list[int]):
        """Jointly refine two colourings; None when they become incompatible."""
        n = self.n
        while True:
            sa = [self._sig(v, ca) for v in range(n)]
            sb = [self._sig(v, cb) for v in range(n)]
            if sorted(sa) != sorted(sb):
                return None
            keys = sorted(set(sa))
            idx = {k: i for i, k in enumerate(keys)}
            na = [idx[s] for s in sa]
            nb = [idx[s] for s in sb]
            if len(keys) == len(set(ca)):
                return na, nb
            ca, cb = na, nb

    def _sig(self, v: int, colors: list[int]):
        counts: dict = {}
        for w, pair in enumerate(self.rows[v]):
            key = (pair, colors[w])
            counts[key] = counts.get(key, 0) + 1
        return (colors[v], tuple(sorted(counts.items())))

    def initial(self) -> list[int]:
        diag = [int(self.lab[v, v]) for v in range(self.n)]
        keys = sorted(set(diag))
        return [keys.index(d) for d in diag]

    def find(self, fixed: list[tuple[int, int]]):
        """One automorphism mapping each u to v for (u, v) in ``fixed``, or None."""
        ca = self.initial()
        cb = list(ca)
        nxt = max(ca) + 1
        for u, v in fixed:
            if ca[u] != cb[v]:
                return None
            ca = list(ca)
            cb = list(cb)
            ca[u] = nxt
            cb[v] = nxt
            nxt += 1
        res = self.refine(ca, cb)
        if res is None:
            return None
        return self._extend(*res)

    def _extend(self, ca, cb):
        n = self.n
        cells: dict[int, list[int]] = {}
        for v in range(n):
            cells.setdefault(ca[v], []).append(v)
        if all(len(c) == 1 for c in cells.values()):
            where = {c: v for v, c in enumerate(cb)}
            perm = tuple(where[ca[v]] for v in range(n))
            return perm if self._check(perm) else None
        cell = min((c for c in cells.values() if len(c) > 1), key=lambda c: (-len(c), c[0]))
        u = cell[0]
        targets = [v for v in range(n) if cb[v] == ca[u]]
        top = max(ca) + 1
        for v in targets:
            na, nb = list(ca), list(cb)
            na[u] = top
            nb[v] = top
            res = self.refine(na, nb)
            if res is None:
                continue
            found = self._extend(*res)
            if found is not None:
                return found
        return None

    def _check(self, perm) -> bool:
        p = np.asarray(perm)
        return bool(np.array_equal(self.lab[np.ix_(p, p)], self.lab))

    def cells_after(self, fixed_points: list[int]) -> list[list[int]]:
        ca = self.initial()
        nxt = max(ca) + 1
        for u in fixed_points:
            ca = list(ca)
            ca[u] = nxt
            nxt += 1
        ca, _ = self.refine(ca, list(ca))
        cells: dict[int, list[int]] = {}
        for v in range(self.n):
            cells.setdefault(ca[v], []).append(v)
        return list(cells.values())


def _orbit(point: int, gens: list[Perm]) -> list[int]:
    seen = [point]
    seen_set = {point}
    i = 0
    while i < len(seen):
        x = seen[i]
        for g in gens:
            y = g[x]
            if y not in seen_set:
                seen_set.add(y)
                seen.append(y)
        i += 1
    return sorted(seen)


def color_automorphisms(m) -> PermGroup:
    """Generators and exact order of {sigma : m[sigma(i), sigma(j)] = m[i, j]}.

    Builds a stabiliser chain: at each level a base point is chosen (lowest index
    in the largest non-singleton cell of the refined colouring) and, for every
    candidate image not yet reached by the orbit of the level's generators, one
    automorphism fixing the previous base points is searched for.
    """
    lab = _labels(m)
    n = lab.shape[0]
    search = _Search(lab)
    base: list[int] = []
    gens: list[Perm] = []
    orbit_sizes: list[int] = []
    while True:
        cells = [c for c in search.cells_after(base) if len(c) > 1]
        if not cells:
            break
        cell = min(cells, key=lambda c: (-len(c), c[0]))
        b = cell[0]
        fixed = [(x, x) for x in base]
        level_gens: list[Perm] = []
        orbit = {b}
        for c in cell:
            if c in orbit:
                continue
            g = search.find(fixed + [(b, c)])
            if g is not None:
                level_gens.append(g)
                orbit = set(_orbit(b, level_gens))
        gens.extend(level_gens)
        orbit_sizes.append(len(orbit))
        base.append(b)
    order = 1
    for s in orbit_sizes:
        order *= s
    return PermGroup(n, gens, order, base, orbit_sizes)


def brute_force_automorphisms(m) -> list[Perm]:
    """All automorphisms by exhaustive enumeration, vectorised over permutations."""
    lab = _labels(m)
    n = lab.shape[0]
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int8 if n < 127 else int)
    ok = np.ones(len(perms), dtype=bool)
    for i in range(n):
        pi = perms[:, i]
        for j in range(n):
            ok &= lab[pi, perms[:, j]] == lab[i, j]
    return [tuple(int(x) for x in p) for p in perms[ok]]
