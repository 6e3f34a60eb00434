"""Matrix kernels shared by the exact (cyclotomic) and float pipelines.

Exact matrices are numpy arrays of dtype ``object`` holding
:class:`~qsymfilt.scalars.CycloNumber`; float matrices are ``complex128``.
Every function here dispatches on that dtype.
"""

from __future__ import annotations

import numpy as np

from .scalars import ONE, ZERO, CycloNumber


def is_exact(m: np.ndarray) -> bool:
    return m.dtype == object


def exact_array(rows) -> np.ndarray:
    """Build an object array of CycloNumbers from nested ints/Fractions/strings."""
    arr = np.asarray(rows, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = CycloNumber.coerce(v)
    return out


def exact_zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(ZERO)
    return out


def exact_identity(n: int) -> np.ndarray:
    out = exact_zeros((n, n))
    for i in range(n):
        out[i, i] = ONE
    return out


def to_complex(m: np.ndarray) -> np.ndarray:
    if not is_exact(m):
        return np.asarray(m, dtype=complex)
    out = np.empty(m.shape, dtype=complex)
    for idx, v in np.ndenumerate(m):
        out[idx] = v.to_complex()
    return out


def conj(m: np.ndarray) -> np.ndarray:
    if not is_exact(m):
        return np.conj(m)
    out = np.empty(m.shape, dtype=object)
    for idx, v in np.ndenumerate(m):
        out[idx] = v.conjugate()
    return out


def dagger(m: np.ndarray) -> np.ndarray:
    return conj(m).T


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if is_exact(a) and is_exact(b):
        return _exact_matmul(a, b)
    return to_complex(a) @ to_complex(b)


def _exact_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    vec_b = b.ndim == 1
    if vec_b:
        b = b.reshape(-1, 1)
    vec_a = a.ndim == 1
    if vec_a:
        a = a.reshape(1, -1)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    out = exact_zeros((a.shape[0], b.shape[1]))
    nz_b = [[(k, b[k, j]) for k in range(b.shape[0]) if b[k, j]] for j in range(b.shape[1])]
    for i in range(a.shape[0]):
        row = a[i]
        for j, col in enumerate(nz_b):
            acc = ZERO
            for k, bkj in col:
                aik = row[k]
                if aik:
                    acc = acc + aik * bkj
            out[i, j] = acc
    if vec_b:
        out = out[:, 0]
    if vec_a:
        out = out[0]
    return out


def is_zero_matrix(m: np.ndarray, tol: float = 0.0) -> bool:
    if is_exact(m):
        return not any(v for v in m.flat)
    return m.size == 0 or float(np.max(np.abs(m))) <= tol


def exact_equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))


def rref(m: np.ndarray, tol: float = 1e-10) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    if not is_exact(m):
        return _float_rref(np.array(m, dtype=complex), tol)
    r = m.copy()
    rows, cols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        piv = next((i for i in range(row, rows) if r[i, col]), None)
        if piv is None:
            continue
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        inv = r[row, col].inverse()
        r[row] = [v * inv for v in r[row]]
        for i in range(rows):
            if i != row and r[i, col]:
                f = r[i, col]
                r[i] = [a - f * b for a, b in zip(r[i], r[row])]
        pivots.append(col)
        row += 1
    return r, pivots


def _float_rref(r: np.ndarray, tol: float) -> tuple[np.ndarray, list[int]]:
    rows, cols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        piv = row + int(np.argmax(np.abs(r[row:, col])))
        if abs(r[piv, col]) <= tol:
            r[row:, col] = 0
            continue
        r[[row, piv]] = r[[piv, row]]
        r[row] = r[row] / r[row, col]
        for i in range(rows):
            if i != row:
                r[i] = r[i] - r[i, col] * r[row]
        pivots.append(col)
        row += 1
    return r, pivots


def rank(m: np.ndarray, tol: float = 1e-9) -> int:
    if m.size == 0:
        return 0
    if is_exact(m):
        return len(rref(m)[1])
    s = np.linalg.svd(np.asarray(m, dtype=complex), compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0]))) if s.size else 0


def nullspace(m: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Columns spanning the right nullspace."""
    cols = m.shape[1]
    if not is_exact(m):
        if m.shape[0] == 0:
            return np.eye(cols, dtype=complex)
        _, s, vh = np.linalg.svd(np.asarray(m, dtype=complex))
        r = int(np.sum(s > tol * max(1.0, s[0] if s.size else 0.0)))
        return vh[r:].conj().T
    if m.shape[0] == 0:
        return exact_identity(cols)
    r, pivots = rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = exact_zeros((cols, len(free)))
    for j, fc in enumerate(free):
        basis[fc, j] = ONE
        for i, pc in enumerate(pivots):
            basis[pc, j] = -r[i, fc]
    return basis


def column_space(m: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Basis of the column space, normalized so each vector has a unit pivot."""
    if m.shape[1] == 0:
        return m
    if not is_exact(m):
        u, s, _ = np.linalg.svd(np.asarray(m, dtype=complex), full_matrices=False)
        r = int(np.sum(s > tol * max(1.0, s[0] if s.size else 0.0)))
        return u[:, :r]
    r, pivots = rref(m.T.copy())
    return r[: len(pivots)].T.copy()


def inverse(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    if not is_exact(m):
        return np.linalg.inv(np.asarray(m, dtype=complex))
    aug = np.concatenate([m, exact_identity(n)], axis=1)
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise np.linalg.LinAlgError("singular matrix")
    return r[:, n:].copy()


def spectral_norm(m: np.ndarray) -> float:
    m = to_complex(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def max_abs(m: np.ndarray) -> float:
    m = to_complex(m)
    return float(np.max(np.abs(m))) if m.size else 0.0
