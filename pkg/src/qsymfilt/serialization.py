"""JSON encoding of scalars, algebras, filtrations, operator matrices and partitions.

Exact rationals are "p/q" strings, cyclotomic numbers {"order", "coeffs"},
floating complex numbers [re, im] pairs.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import algebra_core as ac
from .abelian_duals import FiniteAbelianGroup
from .filtration import OrthogonalFiltration
from .op_verifier import OperatorMatrix, j_labels
from .partition_category import ColoredNoncrossingPartition
from .scalars import CycloNumber, format_fraction


class FormatError(ValueError):
    pass


# -- scalars ------------------------------------------------------------------------------


def encode_scalar(x):
    if isinstance(x, CycloNumber):
        if x.is_rational():
            return format_fraction(x.to_fraction())
        return {"order": x.order, "coeffs": [format_fraction(c) for c in x.coeffs]}
    if isinstance(x, (Fraction, int, np.integer)):
        return format_fraction(Fraction(int(x)) if not isinstance(x, Fraction) else x)
    z = complex(x)
    return [z.real, z.imag]


def decode_scalar(v):
    """str / int -> exact rational, {order, coeffs} -> cyclotomic, [re, im] or float -> complex."""
    if isinstance(v, bool):
        raise FormatError("booleans are not scalars")
    if isinstance(v, (str, int)):
        try:
            return CycloNumber.rational(Fraction(v))
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad rational {v!r}") from exc
    if isinstance(v, dict):
        if set(v) != {"order", "coeffs"}:
            raise FormatError("cyclotomic numbers need exactly 'order' and 'coeffs'")
        return CycloNumber.coerce(v)
    if isinstance(v, float):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(t, (int, float)) for t in v):
        return complex(v[0], v[1])
    raise FormatError(f"cannot decode scalar {v!r}")


def encode_matrix(m: np.ndarray):
    return [[encode_scalar(x) for x in row] for row in np.asarray(m)]


def decode_vector(row) -> list:
    if not isinstance(row, list):
        raise FormatError("vectors must be JSON arrays")
    return [decode_scalar(x) for x in row]


# -- algebras ------------------------------------------------------------------------------


def _group(spec) -> ac.FiniteGroupData:
    if spec == "S3":
        return ac.symmetric_group_s3()
    if spec == "D4":
        return ac.dihedral_group_d4()
    if isinstance(spec, dict) and "abelian" in spec:
        return ac.abelian_group([int(r) for r in spec["abelian"]])
    if isinstance(spec, dict) and "cyclic" in spec:
        return ac.cyclic_group(int(spec["cyclic"]))
    raise FormatError(f"unknown group {spec!r}")


def decode_algebra(d: dict) -> ac.StructuredAlgebra:
    """Algebra from {"kind": pointwise | matrix | group | function | structure, ...}."""
    if not isinstance(d, dict) or "kind" not in d:
        raise FormatError("algebra needs a 'kind'")
    kind = d["kind"]
    if kind == "pointwise":
        state = [decode_scalar(x) for x in d["state"]] if "state" in d else None
        return ac.pointwise_algebra(int(d["n"]), state)
    if kind == "matrix":
        weights = [decode_scalar(x) for x in d["weights"]] if "weights" in d else None
        return ac.matrix_algebra(int(d["k"]), weights)
    if kind == "group":
        return ac.group_algebra(_group(d["group"]))
    if kind == "function":
        return ac.function_algebra(_group(d["group"]))
    if kind == "structure":
        labels = d["labels"]
        products: dict = {}
        for i, j, k, c in d["products"]:
            products.setdefault((int(i), int(j)), []).append((int(k), decode_scalar(c)))
        return ac.StructuredAlgebra(
            labels, products,
            [decode_vector(r) for r in d["involution"]],
            decode_vector(d["unit"]), decode_vector(d["state"]), d.get("name", ""),
        )
    raise FormatError(f"unknown algebra kind {kind!r}")


def decode_filtration(d: dict) -> OrthogonalFiltration:
    """{"algebra": {...}, "parts": [[coords, ...], ...], "labels": [...], "levels": [...]}."""
    if not isinstance(d, dict) or "algebra" not in d or "parts" not in d:
        raise FormatError("filtration needs 'algebra' and 'parts'")
    alg = decode_algebra(d["algebra"])
    parts = d["parts"]
    if not isinstance(parts, list) or not parts:
        raise FormatError("filtration needs a nonempty 'parts' list")
    coords = []
    for p in parts:
        if not isinstance(p, list) or not p:
            raise FormatError("every part needs at least one vector")
        vecs = [decode_vector(v) for v in p]
        if any(len(v) != alg.dim for v in vecs):
            raise FormatError(f"part vectors must have length {alg.dim}")
        coords.append(vecs)
    return OrthogonalFiltration.from_coords(alg, coords, d.get("labels"), d.get("levels"))


# -- operator matrices ----------------------------------------------------------------------


def encode_operator_matrix(u: OperatorMatrix) -> dict:
    e = u.entries
    return {
        "n": u.d // 2,
        "m": u.m,
        "entries": np.stack([e.real, e.imag], axis=-1).tolist(),
        "tolerance": u.tol,
    }


def decode_operator_matrix(d: dict) -> OperatorMatrix:
    try:
        n, m = int(d["n"]), int(d["m"])
        raw = np.asarray(d["entries"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad operator matrix: {exc}") from exc
    if raw.shape != (2 * n, 2 * n, m, m, 2):
        raise FormatError(f"entries must have shape {(2 * n, 2 * n, m, m, 2)}, got {raw.shape}")
    tol = float(d.get("tolerance", 1e-9))
    return OperatorMatrix(raw[..., 0] + 1j * raw[..., 1], j_labels(n), tol)


# -- other objects ------------------------------------------------------------------------------


def decode_partition(d: dict) -> ColoredNoncrossingPartition:
    try:
        return ColoredNoncrossingPartition.from_dict(d)
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad partition: {exc}") from exc


def decode_abelian_group(d: dict) -> FiniteAbelianGroup:
    """{"factors": [r_1, ...], "generators": [[...], ...] (optional)}."""
    factors = tuple(int(r) for r in d["factors"])
    gens = d.get("generators")
    return FiniteAbelianGroup(factors, [tuple(g) for g in gens] if gens else None)


def to_jsonable(x):
    """Recursively convert numpy and exact scalars to plain JSON values."""
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        if x.dtype == object:
            return encode_matrix(x) if x.ndim == 2 else [encode_scalar(v) for v in x]
        if np.iscomplexobj(x):
            if np.allclose(x.imag, 0):
                return x.real.tolist()
            return np.stack([x.real, x.imag], axis=-1).tolist()
        return x.tolist()
    if isinstance(x, (CycloNumber, Fraction)):
        return encode_scalar(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, complex):
        return [x.real, x.imag] if x.imag else x.real
    return x
