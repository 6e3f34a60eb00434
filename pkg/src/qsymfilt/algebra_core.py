"""Finite-dimensional *-algebras given by structure constants, with a faithful state."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import linalg
from .scalars import ONE, ZERO, CycloNumber, rational_sqrt, zeta


class AlgebraError(ValueError):
    pass


class RankError(AlgebraError):
    pass


class StructuredAlgebra:
    """A *-algebra on an explicit basis e_0..e_{n-1}.

    ``products[(i, j)]`` lists the nonzero ``(k, c)`` with e_i e_j = sum c e_k;
    ``involution`` row i holds the coordinates of e_i*; ``unit`` and ``state``
    are coordinate vectors of 1 and of (omega(e_i))_i.
    """

    def __init__(self, labels, products, involution, unit, state, name: str = ""):
        self.labels = tuple(labels)
        self.name = name
        n = len(self.labels)
        self.products = {
            key: tuple((k, CycloNumber.coerce(c)) for k, c in terms if CycloNumber.coerce(c))
            for key, terms in products.items()
        }
        self.involution = linalg.exact_array(involution)
        self.unit = linalg.exact_array(unit)
        self.state = linalg.exact_array(state)
        if self.involution.shape != (n, n) or self.unit.shape != (n,) or self.state.shape != (n,):
            raise AlgebraError("involution/unit/state have inconsistent dimensions")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def __repr__(self):
        return f"StructuredAlgebra({self.name or '?'}, dim={self.dim})"

    # -- float views ------------------------------------------------------
    @cached_property
    def structure_tensor(self) -> np.ndarray:
        n = self.dim
        c = np.zeros((n, n, n), dtype=complex)
        for (i, j), terms in self.products.items():
            for k, v in terms:
                c[i, j, k] += v.to_complex()
        return c

    @cached_property
    def gram(self) -> np.ndarray:
        """Exact Gram matrix G[i, j] = omega(e_i* e_j)."""
        n = self.dim
        g = linalg.exact_zeros((n, n))
        basis = [self.basis_element(i) for i in range(n)]
        for i in range(n):
            for j in range(n):
                g[i, j] = omega_pair(basis[i], basis[j])
        return g

    @cached_property
    def gram_float(self) -> np.ndarray:
        return linalg.to_complex(self.gram)

    # -- elements ----------------------------------------------------------
    def element(self, coords) -> "AlgebraElement":
        coords = np.asarray(coords)
        if coords.dtype != object and not np.iscomplexobj(coords) and coords.dtype.kind in "iu":
            coords = linalg.exact_array(coords)
        elif coords.dtype == object:
            coords = linalg.exact_array(coords)
        else:
            coords = coords.astype(complex)
        if coords.shape != (self.dim,):
            raise AlgebraError(f"expected {self.dim} coordinates, got shape {coords.shape}")
        return AlgebraElement(self, coords)

    def basis_element(self, i: int) -> "AlgebraElement":
        v = linalg.exact_zeros(self.dim)
        v[i] = ONE
        return AlgebraElement(self, v)

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, self.unit.copy())

    def left_multiplication(self, a: "AlgebraElement") -> np.ndarray:
        """Matrix of x -> a x in the basis coordinates (column j = a e_j)."""
        cols = [multiply(a, self.basis_element(j)).coords for j in range(self.dim)]
        if a.exact:
            return np.stack(cols, axis=1)
        return np.stack([linalg.to_complex(c) for c in cols], axis=1)

    # -- axioms ------------------------------------------------------------
    def check_axioms(self) -> list[str]:
        """Return a list of violated axioms (empty if the algebra is sound)."""
        problems = []
        n = self.dim
        basis = [self.basis_element(i) for i in range(n)]
        for i, j in itertools.product(range(n), repeat=2):
            ab = multiply(basis[i], basis[j])
            lhs = star(ab)
            rhs = multiply(star(basis[j]), star(basis[i]))
            if not linalg.exact_equal(lhs.coords, rhs.coords):
                problems.append(f"(e{i} e{j})* != e{j}* e{i}*")
            for k in range(n):
                left = multiply(ab, basis[k])
                right = multiply(basis[i], multiply(basis[j], basis[k]))
                if not linalg.exact_equal(left.coords, right.coords):
                    problems.append(f"associativity fails on ({i},{j},{k})")
        for i in range(n):
            if not linalg.exact_equal(star(star(basis[i])).coords, basis[i].coords):
                problems.append(f"e{i}** != e{i}")
            if not linalg.exact_equal(multiply(self.one(), basis[i]).coords, basis[i].coords):
                problems.append(f"1 e{i} != e{i}")
            if not linalg.exact_equal(multiply(basis[i], self.one()).coords, basis[i].coords):
                problems.append(f"e{i} 1 != e{i}")
        if omega(self.one()) != ONE:
            problems.append("omega(1) != 1")
        if not self.state_is_faithful():
            problems.append("Gram matrix of omega is not positive definite")
        return problems

    def state_is_faithful(self, tol: float = 1e-9) -> bool:
        g = self.gram_float
        if not np.allclose(g, g.conj().T, atol=1e-12):
            return False
        return float(np.min(np.linalg.eigvalsh(g))) > tol

    def is_tracial(self) -> bool:
        n = self.dim
        basis = [self.basis_element(i) for i in range(n)]
        for i, j in itertools.product(range(n), repeat=2):
            if omega(multiply(basis[i], basis[j])) != omega(multiply(basis[j], basis[i])):
                return False
        return True


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    algebra: StructuredAlgebra
    coords: np.ndarray

    @property
    def exact(self) -> bool:
        return self.coords.dtype == object

    def to_float(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, linalg.to_complex(self.coords))

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        _check_same(self, other)
        if self.exact and other.exact:
            return AlgebraElement(self.algebra, self.coords + other.coords)
        return AlgebraElement(self.algebra, linalg.to_complex(self.coords) + linalg.to_complex(other.coords))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + other.scale(-1)

    def scale(self, c) -> "AlgebraElement":
        if self.exact and not isinstance(c, (float, complex)):
            c = CycloNumber.coerce(c)
            return AlgebraElement(self.algebra, np.array([c * v for v in self.coords], dtype=object))
        return AlgebraElement(self.algebra, complex(c) * linalg.to_complex(self.coords))

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return multiply(self, other)

    def __repr__(self):
        return f"AlgebraElement({[str(v) for v in self.coords] if self.exact else self.coords})"


def _check_same(a: AlgebraElement, b: AlgebraElement) -> None:
    if a.algebra is not b.algebra or a.coords.shape != b.coords.shape:
        raise AlgebraError("elements belong to different algebras or have mismatched dimensions")


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    _check_same(a, b)
    alg = a.algebra
    if a.exact and b.exact:
        out = linalg.exact_zeros(alg.dim)
        nz_b = [(j, y) for j, y in enumerate(b.coords) if y]
        for i, x in enumerate(a.coords):
            if not x:
                continue
            for j, y in nz_b:
                terms = alg.products.get((i, j))
                if terms:
                    xy = x * y
                    for k, c in terms:
                        out[k] = out[k] + xy * c
        return AlgebraElement(alg, out)
    ac, bc = linalg.to_complex(a.coords), linalg.to_complex(b.coords)
    return AlgebraElement(alg, np.einsum("i,j,ijk->k", ac, bc, alg.structure_tensor))


def star(a: AlgebraElement) -> AlgebraElement:
    alg = a.algebra
    if a.exact:
        out = linalg.exact_zeros(alg.dim)
        for i, x in enumerate(a.coords):
            if x:
                xc = x.conjugate()
                for k, jv in enumerate(alg.involution[i]):
                    if jv:
                        out[k] = out[k] + xc * jv
        return AlgebraElement(alg, out)
    j = linalg.to_complex(alg.involution)
    return AlgebraElement(alg, np.conj(a.coords) @ j)


def omega(a: AlgebraElement):
    if a.exact:
        total = ZERO
        for x, w in zip(a.coords, a.algebra.state):
            if x and w:
                total = total + x * w
        return total
    return complex(np.dot(a.coords, linalg.to_complex(a.algebra.state)))


def omega_pair(a: AlgebraElement, b: AlgebraElement):
    """omega(a* b)."""
    _check_same(a, b)
    return omega(multiply(star(a), b))


def coords_matrix(vectors: Sequence[AlgebraElement], dim: int | None = None) -> np.ndarray:
    """Stack element coordinates as columns (exact if every vector is exact)."""
    if not vectors:
        return linalg.exact_zeros((dim or 0, 0))
    if all(v.exact for v in vectors):
        return np.stack([v.coords for v in vectors], axis=1)
    return np.stack([linalg.to_complex(v.coords) for v in vectors], axis=1)


def gram_orthonormalize(vectors: Sequence[AlgebraElement]) -> list[AlgebraElement]:
    """Gram-Schmidt with respect to <a, b> = omega(a* b), preserving order.

    The result stays exact when every squared norm is the square of a rational;
    otherwise all outputs are returned in float mode (``element.exact`` is False).
    """
    if not vectors:
        return []
    alg = vectors[0].algebra
    mat = coords_matrix(vectors)
    if linalg.rank(mat) < len(vectors):
        raise RankError("input vectors are linearly dependent")
    ortho = orthogonalize(vectors)
    norms_sq = [omega_pair(u, u) for u in ortho]
    roots = [rational_sqrt(n) if isinstance(n, CycloNumber) else None for n in norms_sq]
    if all(r is not None for r in roots):
        return [u.scale(CycloNumber.rational(1 / r)) for u, r in zip(ortho, roots)]
    out = []
    for u, n in zip(ortho, norms_sq):
        out.append(AlgebraElement(alg, linalg.to_complex(u.coords) / np.sqrt(complex(n).real)))
    return out


def orthogonalize(vectors: Sequence[AlgebraElement]) -> list[AlgebraElement]:
    """Unnormalized Gram-Schmidt; exact whenever the inputs are exact."""
    ortho: list[AlgebraElement] = []
    norms: list = []
    for v in vectors:
        u = v
        for w, nw in zip(ortho, norms):
            coef = omega_pair(w, v)
            if u.exact and w.exact:
                if coef:
                    u = u - w.scale(coef / nw)
            else:
                u = u - w.scale(complex(coef) / complex(nw))
        nu = omega_pair(u, u)
        if (isinstance(nu, CycloNumber) and nu.is_zero()) or abs(complex(nu)) < 1e-14:
            raise RankError("input vectors are linearly dependent")
        ortho.append(u)
        norms.append(nu)
    return ortho


# -- constructors --------------------------------------------------------------


def pointwise_algebra(n: int, state=None, name: str | None = None) -> StructuredAlgebra:
    """C^n with pointwise product; default state is the uniform probability."""
    if state is None:
        state = [Fraction(1, n)] * n
    products = {(i, i): [(i, 1)] for i in range(n)}
    involution = np.eye(n, dtype=int).tolist()
    return StructuredAlgebra(
        [f"e{i + 1}" for i in range(n)], products, involution, [1] * n, state, name or f"C^{n}"
    )


def matrix_algebra(k: int, weights=None, name: str | None = None) -> StructuredAlgebra:
    """M_k on matrix units e_ij (index i*k + j) with state Tr(diag(weights) .)."""
    if weights is None:
        weights = [Fraction(1, k)] * k
    n = k * k
    products = {}
    for i, j, l in itertools.product(range(k), repeat=3):
        products[(i * k + j, j * k + l)] = [(i * k + l, 1)]
    involution = [[0] * n for _ in range(n)]
    for i, j in itertools.product(range(k), repeat=2):
        involution[i * k + j][j * k + i] = 1
    unit = [1 if i == j else 0 for i in range(k) for j in range(k)]
    state = [weights[i] if i == j else 0 for i in range(k) for j in range(k)]
    labels = [f"e{i + 1}{j + 1}" for i in range(k) for j in range(k)]
    return StructuredAlgebra(labels, products, involution, unit, state, name or f"M_{k}")


def direct_sum(a: StructuredAlgebra, b: StructuredAlgebra, t=Fraction(1, 2)) -> StructuredAlgebra:
    """A + B with state t*omega_A + (1-t)*omega_B."""
    t = CycloNumber.coerce(t)
    na, nb = a.dim, b.dim
    products = {}
    for (i, j), terms in a.products.items():
        products[(i, j)] = list(terms)
    for (i, j), terms in b.products.items():
        products[(na + i, na + j)] = [(na + k, c) for k, c in terms]
    inv = linalg.exact_zeros((na + nb, na + nb))
    inv[:na, :na] = a.involution
    inv[na:, na:] = b.involution
    unit = np.concatenate([a.unit, b.unit])
    state = np.concatenate([np.array([t * w for w in a.state], dtype=object),
                            np.array([(1 - t) * w for w in b.state], dtype=object)])
    labels = [f"A.{x}" for x in a.labels] + [f"B.{x}" for x in b.labels]
    return StructuredAlgebra(labels, products, inv, unit, state, f"{a.name}+{b.name}")


# -- finite groups ---------------------------------------------------------------


@dataclass
class CharacterTable:
    classes: list[list[int]]
    characters: list[list[CycloNumber]]
    labels: list[str] = field(default_factory=list)

    @property
    def dims(self) -> list[int]:
        return [int(row[0].to_fraction()) for row in self.characters]


@dataclass
class FiniteGroupData:
    labels: list[str]
    table: np.ndarray
    identity: int = 0
    character_table: CharacterTable | None = None
    name: str = ""

    def __post_init__(self):
        self.table = np.asarray(self.table, dtype=int)
        n = len(self.labels)
        if self.table.shape != (n, n):
            raise AlgebraError("multiplication table has the wrong shape")
        for row in self.table:
            if sorted(row) != list(range(n)):
                raise AlgebraError("multiplication table is not a Latin square")
        if any(self.table[self.identity, g] != g or self.table[g, self.identity] != g for g in range(n)):
            raise AlgebraError("identity index is not a two-sided identity")
        t = self.table
        for a, b, c in itertools.product(range(n), repeat=3):
            if t[t[a, b], c] != t[a, t[b, c]]:
                raise AlgebraError("multiplication table is not associative")
        self.inverse = [int(np.where(t[g] == self.identity)[0][0]) for g in range(n)]
        if self.character_table is not None:
            self._check_characters()

    @property
    def order(self) -> int:
        return len(self.labels)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def class_of(self) -> list[int]:
        ct = self.character_table
        out = [0] * self.order
        for ci, cl in enumerate(ct.classes):
            for g in cl:
                out[g] = ci
        return out

    def character(self, u: int, g: int) -> CycloNumber:
        ct = self.character_table
        return ct.characters[u][self.class_of()[g]]

    def _check_characters(self) -> None:
        ct = self.character_table
        covered = sorted(g for cl in ct.classes for g in cl)
        if covered != list(range(self.order)):
            raise AlgebraError("conjugacy classes do not partition the group")
        sizes = [len(cl) for cl in ct.classes]
        for u, v in itertools.product(range(len(ct.characters)), repeat=2):
            total = ZERO
            for c, size in enumerate(sizes):
                total = total + ct.characters[u][c].conjugate() * ct.characters[v][c] * size
            if total != (self.order if u == v else 0):
                raise AlgebraError(f"character rows {u}, {v} are not orthonormal")


def group_algebra(g: FiniteGroupData) -> StructuredAlgebra:
    """C[G] on the basis lambda_g with its canonical trace."""
    n = g.order
    products = {(a, b): [(g.mul(a, b), 1)] for a in range(n) for b in range(n)}
    involution = [[1 if k == g.inverse[i] else 0 for k in range(n)] for i in range(n)]
    unit = [1 if i == g.identity else 0 for i in range(n)]
    return StructuredAlgebra(
        [f"l[{x}]" for x in g.labels], products, involution, unit, unit, f"C[{g.name or 'G'}]"
    )


def function_algebra(g: FiniteGroupData) -> StructuredAlgebra:
    """C(G) = C^|G| with the normalized counting measure."""
    alg = pointwise_algebra(g.order, name=f"C({g.name or 'G'})")
    alg.labels = tuple(f"d[{x}]" for x in g.labels)
    return alg


def cyclic_group(n: int) -> FiniteGroupData:
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    chars = [[zeta(n, (s * g) % n) if n > 1 else ONE for g in range(n)] for s in range(n)]
    ct = CharacterTable([[g] for g in range(n)], chars, [f"chi{s}" for s in range(n)])
    return FiniteGroupData([str(g) for g in range(n)], table, 0, ct, f"Z{n}")


def abelian_group(factors: Sequence[int]) -> FiniteGroupData:
    """Direct sum of cyclic groups; elements are tuples in lexicographic order."""
    factors = tuple(int(r) for r in factors)
    elems = list(itertools.product(*[range(r) for r in factors]))
    index = {e: i for i, e in enumerate(elems)}
    table = [
        [index[tuple((x + y) % r for x, y, r in zip(a, b, factors))] for b in elems] for a in elems
    ]
    order = _lcm(factors)
    chars = []
    for s in elems:
        row = []
        for gam in elems:
            power = sum(si * gi * (order // r) for si, gi, r in zip(s, gam, factors)) % order
            row.append(zeta(order, power) if order > 1 else ONE)
        chars.append(row)
    ct = CharacterTable([[g] for g in range(len(elems))], chars, [f"chi{s}" for s in elems])
    labels = ["".join(str(x) for x in e) for e in elems]
    return FiniteGroupData(labels, table, 0, ct, "+".join(f"Z{r}" for r in factors))


def _lcm(values) -> int:
    out = 1
    for v in values:
        out = out * v // np.gcd(out, v)
    return int(out)


def permutation_group_data(perms: Sequence[tuple[int, ...]], labels=None, name="",
                           character_table=None) -> FiniteGroupData:
    perms = [tuple(p) for p in perms]
    index = {p: i for i, p in enumerate(perms)}

    def compose(p, q):  # (p q)(x) = p(q(x))
        return tuple(p[q[x]] for x in range(len(p)))

    try:
        table = [[index[compose(p, q)] for q in perms] for p in perms]
        ident = index[tuple(range(len(perms[0])))]
    except KeyError as exc:
        raise AlgebraError(f"permutations are not closed under composition: {exc.args[0]} missing") from None
    return FiniteGroupData(labels or [str(p) for p in perms], table, ident, character_table, name)


def _sign(p) -> int:
    s, seen = 1, set()
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        s *= (-1) ** (length - 1)
    return s


def symmetric_group_s3() -> FiniteGroupData:
    """S_3 with even permutations first, then odd ones."""
    perms = sorted(itertools.permutations(range(3)), key=lambda p: (-_sign(p), p))
    # order: (0,1,2), (1,2,0), (2,0,1), (0,2,1), (1,0,2), (2,1,0)
    perms = [perms[0], perms[1], perms[2], perms[3], perms[4], perms[5]]
    ident = perms.index((0, 1, 2))
    three_cycles = [i for i, p in enumerate(perms) if _sign(p) == 1 and i != ident]
    transpositions = [i for i, p in enumerate(perms) if _sign(p) == -1]
    R = CycloNumber.rational
    ct = CharacterTable(
        [[ident], three_cycles, transpositions],
        [[R(1), R(1), R(1)], [R(1), R(1), R(-1)], [R(2), R(-1), R(0)]],
        ["trivial", "sign", "standard"],
    )
    labels = ["".join(str(x + 1) for x in p) for p in perms]
    return permutation_group_data(perms, labels, "S3", ct)


def dihedral_group_d4() -> FiniteGroupData:
    """Symmetries of the square acting on vertices 0..3."""
    r = (1, 2, 3, 0)
    s = (0, 3, 2, 1)

    def compose(p, q):
        return tuple(p[q[x]] for x in range(4))

    rot = [tuple(range(4))]
    for _ in range(3):
        rot.append(compose(r, rot[-1]))
    perms = rot + [compose(s, x) for x in rot]  # e r r2 r3 s sr sr2 sr3
    R = CycloNumber.rational
    classes = [[0], [2], [1, 3], [4, 6], [5, 7]]
    chars = [
        [R(1), R(1), R(1), R(1), R(1)],
        [R(1), R(1), R(1), R(-1), R(-1)],
        [R(1), R(1), R(-1), R(1), R(-1)],
        [R(1), R(1), R(-1), R(-1), R(1)],
        [R(2), R(-2), R(0), R(0), R(0)],
    ]
    ct = CharacterTable(classes, chars, ["A1", "A2", "B1", "B2", "E"])
    labels = ["e", "r", "r2", "r3", "s", "sr", "sr2", "sr3"]
    return permutation_group_data(perms, labels, "D4", ct)


# -- spectral decomposition of the regular action ----------------------------------


@dataclass
class SpectralSubspace:
    label: str
    dimension: int
    basis: list[AlgebraElement]
    projection: np.ndarray


def regular_spectral_decomposition(g: FiniteGroupData) -> list[SpectralSubspace]:
    """Isotypic subspaces of C(G) under left translation, one per irreducible class.

    The projection for u is f -> (d_u/|G|) sum_h conj(chi_u(h)) (f o L_h^{-1});
    in the delta basis its (x, y) entry is (d_u/|G|) conj(chi_u(x y^{-1})).
    """
    ct = g.character_table
    if ct is None:
        raise AlgebraError("regular_spectral_decomposition needs a character table")
    alg = function_algebra(g)
    cls = g.class_of()
    n = g.order
    out = []
    for u, row in enumerate(ct.characters):
        d_u = ct.dims[u]
        p = linalg.exact_zeros((n, n))
        for x in range(n):
            for y in range(n):
                h = g.mul(x, g.inverse[y])
                p[x, y] = row[cls[h]].conjugate() * Fraction(d_u, n)
        cols = linalg.column_space(p)
        basis = [AlgebraElement(alg, cols[:, j].copy()) for j in range(cols.shape[1])]
        label = ct.labels[u] if ct.labels else f"u{u}"
        out.append(SpectralSubspace(label, len(basis), basis, p))
    return out


@dataclass
class SupportCheck:
    ok: bool
    offending: tuple[int, int] | None = None
    reason: str = ""


def support_subgroup_check(g: FiniteGroupData, dims: dict[int, int] | Sequence[int]) -> SupportCheck:
    """Is {x : dims[x] > 0} a subgroup?  Reports the first failing pair."""
    if not isinstance(dims, dict):
        dims = dict(enumerate(dims))
    support = [x for x in range(g.order) if dims.get(x, 0) > 0]
    sset = set(support)
    if g.identity not in sset:
        return SupportCheck(False, None, "identity not in support")
    for a in support:
        for b in support:
            if g.mul(a, b) not in sset:
                return SupportCheck(False, (a, b), "not closed under products")
    for a in support:
        if g.inverse[a] not in sset:
            return SupportCheck(False, (a, a), "not closed under inverses")
    return SupportCheck(True)
