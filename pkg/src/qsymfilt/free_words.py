"""Reduced words in free products of cyclic and finite groups."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np


class WordError(ValueError):
    pass


@dataclass(frozen=True)
class FactorSpec:
    """One free factor.

    kind "infinite": Z with generator g, elements are nonzero exponents.
    kind "cyclic": Z_m, exponents normalised to (-m/2, m/2], length |exponent|.
    kind "finite": multiplication ``table`` with identity 0 and a length table
    (or generators from which lengths are computed by BFS).
    """

    kind: str
    order: int | None = None
    table: tuple | None = None
    lengths: tuple | None = None
    generators: tuple | None = None
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("infinite", "cyclic", "finite"):
            raise WordError(f"unknown factor kind {self.kind!r}")
        if self.kind == "cyclic" and (self.order is None or self.order < 2):
            raise WordError("cyclic factors need an order >= 2")
        if self.kind == "finite":
            if self.table is None:
                raise WordError("finite factors need a multiplication table")
            t = np.asarray(self.table)
            n = t.shape[0]
            if t.shape != (n, n) or any(t[0, g] != g or t[g, 0] != g for g in range(n)):
                raise WordError("finite factor table must have identity 0")
            object.__setattr__(self, "table", tuple(tuple(int(x) for x in row) for row in t))
            object.__setattr__(self, "order", n)
            if self.lengths is None:
                if not self.generators:
                    raise WordError("finite factors need generators or a length table")
                object.__setattr__(self, "lengths", self._bfs())
            else:
                object.__setattr__(self, "lengths", tuple(int(x) for x in self.lengths))
            ls = self.lengths
            if len(ls) != n or ls[0] != 0 or any(ls[g] != ls[self.inverse(g)] for g in range(n)):
                raise WordError("length table must satisfy l(e)=0 and l(g)=l(g^-1)")

    @classmethod
    def infinite(cls, label=""):
        return cls("infinite", label=label)

    @classmethod
    def cyclic(cls, m: int, label=""):
        return cls("cyclic", order=m, label=label)

    def _bfs(self) -> tuple:
        gens = set(self.generators) | {self.inverse(g) for g in self.generators}
        dist = {0: 0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for s in sorted(gens):
                    y = self.table[x][s]
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        nxt.append(y)
            frontier = nxt
        if len(dist) != self.order:
            raise WordError("generators do not generate the finite factor")
        return tuple(dist[g] for g in range(self.order))

    def identity(self):
        return 0

    def normalize(self, x: int) -> int:
        if self.kind == "infinite":
            return int(x)
        if self.kind == "cyclic":
            m = self.order
            x = int(x) % m
            return x - m if x > m // 2 else x
        x = int(x)
        if not 0 <= x < self.order:
            raise WordError(f"element {x} outside the finite factor")
        return x

    def mul(self, x: int, y: int) -> int:
        if self.kind == "finite":
            return self.table[x][y]
        return self.normalize(x + y)

    def inverse(self, x: int) -> int:
        if self.kind == "finite":
            return self.table[x].index(0)
        return self.normalize(-x)

    def length(self, x: int) -> int:
        if self.kind == "finite":
            return self.lengths[x]
        return abs(x)

    def elements_of_length(self, l: int) -> list[int]:
        """Nonidentity elements of length exactly l, in increasing exponent order."""
        if l == 0:
            return []
        if self.kind == "infinite":
            return [-l, l]
        if self.kind == "cyclic":
            return sorted({x for x in (-l, l) if self.normalize(x) == x})
        return [g for g in range(1, self.order) if self.lengths[g] == l]


@dataclass(frozen=True)
class FreeProductWord:
    blocks: tuple[tuple[int, int], ...]
    group: "FreeProduct" = field(compare=False, hash=False, repr=False, default=None)

    def __iter__(self):
        return iter(self.blocks)

    def __len__(self):
        return len(self.blocks)

    def __mul__(self, other: "FreeProductWord") -> "FreeProductWord":
        return self.group.multiply(self, other)

    def inverse(self) -> "FreeProductWord":
        return self.group.inverse(self)

    def __str__(self):
        return self.group.format(self) if self.group else repr(self.blocks)

    def sort_key(self):
        return (word_length(self), tuple(f for f, _ in self.blocks), tuple(x for _, x in self.blocks))


class FreeProduct:
    def __init__(self, factors: Sequence[FactorSpec]):
        if not factors:
            raise WordError("a free product needs at least one factor")
        self.factors = list(factors)

    @classmethod
    def free_group(cls, n: int) -> "FreeProduct":
        return cls([FactorSpec.infinite(f"g{i + 1}") for i in range(n)])

    def identity(self) -> FreeProductWord:
        return FreeProductWord((), self)

    def generator(self, i: int, power: int = 1) -> FreeProductWord:
        return self.reduce([(i, power)])

    def reduce(self, blocks: Iterable[tuple[int, int]]) -> FreeProductWord:
        stack: list[tuple[int, int]] = []
        for f, x in blocks:
            if not 0 <= f < len(self.factors):
                raise WordError(f"factor index {f} out of range")
            spec = self.factors[f]
            x = spec.normalize(x)
            if x == 0:
                continue
            if stack and stack[-1][0] == f:
                y = spec.mul(stack[-1][1], x)
                stack.pop()
                if y != 0:
                    stack.append((f, y))
            else:
                stack.append((f, x))
        return FreeProductWord(tuple(stack), self)

    def multiply(self, v: FreeProductWord, w: FreeProductWord) -> FreeProductWord:
        return self.reduce(list(v.blocks) + list(w.blocks))

    def inverse(self, w: FreeProductWord) -> FreeProductWord:
        return FreeProductWord(tuple((f, self.factors[f].inverse(x)) for f, x in reversed(w.blocks)), self)

    def block_length_of(self, f: int, x: int) -> int:
        return self.factors[f].length(x)

    def format(self, w: FreeProductWord) -> str:
        if not w.blocks:
            return "e"
        out = []
        for f, x in w.blocks:
            if self.factors[f].kind == "finite":
                out.append(f"g{f + 1}[{x}]")
            else:
                out.append(f"g{f + 1}^{x}")
        return ".".join(out)

    _TOKEN = re.compile(r"^g(\d+)(?:\^(-?\d+)|\[(\d+)\])?$")

    def parse(self, s: str) -> FreeProductWord:
        s = s.strip()
        if s in ("", "e"):
            return self.identity()
        blocks = []
        for tok in s.split("."):
            m = self._TOKEN.match(tok.strip())
            if not m:
                raise WordError(f"cannot parse word token {tok!r}")
            f = int(m.group(1)) - 1
            x = int(m.group(2)) if m.group(2) is not None else int(m.group(3)) if m.group(3) else 1
            blocks.append((f, x))
        return self.reduce(blocks)

    def enumerate_ball(self, radius: int) -> list[FreeProductWord]:
        return enumerate_ball(self, radius)


def word_length(w: FreeProductWord) -> int:
    return sum(w.group.factors[f].length(x) for f, x in w.blocks)


def block_length(w: FreeProductWord) -> int:
    return len(w.blocks)


def shape(w: FreeProductWord) -> tuple[int, ...]:
    out, acc = [], 0
    for f, x in w.blocks:
        acc += w.group.factors[f].length(x)
        out.append(acc)
    return tuple(out)


def shape_sort_key(s: Sequence[int]) -> tuple:
    """Total order on shapes: by last entry (word length), then number of entries, then lexicographic."""
    s = tuple(s)
    return (s[-1] if s else 0, len(s), s)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_ball(group: FreeProduct, radius: int, max_size: int | None = None) -> list[FreeProductWord]:
    """All reduced words of length <= radius, ordered by length, factor sequence, then elements."""
    if radius < 0:
        raise WordError("radius must be nonnegative")
    nf = len(group.factors)
    out = [group.identity()]
    for l in range(1, radius + 1):
        layer = []
        for b in range(1, l + 1):
            for seq in itertools.product(range(nf), repeat=b):
                if any(seq[i] == seq[i + 1] for i in range(b - 1)):
                    continue
                for comp in _compositions(l, b):
                    choices = [group.factors[f].elements_of_length(c) for f, c in zip(seq, comp)]
                    if any(not c for c in choices):
                        continue
                    for elems in itertools.product(*choices):
                        layer.append(FreeProductWord(tuple(zip(seq, elems)), group))
        layer.sort(key=lambda w: w.sort_key())
        out.extend(layer)
        if max_size is not None and len(out) > max_size:
            raise WordError(f"ball exceeds the size cap {max_size}")
    return out


def partition_by(words: Iterable[FreeProductWord], mode: str = "length") -> dict:
    """Group words by length, (length, block length) or shape."""
    keyf = {
        "length": word_length,
        "length-and-block": lambda w: (word_length(w), block_length(w)),
        "shape": shape,
    }.get(mode)
    if keyf is None:
        raise WordError(f"unknown partition mode {mode!r}")
    out: dict = {}
    for w in words:
        out.setdefault(keyf(w), []).append(w)
    return out
