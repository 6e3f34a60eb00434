"""Command-line entry point.

Exit codes: 0 when every check passes, 2 when some check fails, 1 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from . import serialization
from .abelian_duals import FiniteAbelianGroup, GroupError, color_reduction, conjecture_experiment
from .algebra_core import AlgebraError, regular_spectral_decomposition, support_subgroup_check
from .filtration import (
    ColoredMatrix,
    FiltrationError,
    band_violation,
    color_components,
    dirac_operator,
    q_matrix,
    spectral_triple_type_check,
    validate,
    vdw_parameter,
)
from .fleet import DEFAULT_SEED, build_fleet
from .free_words import FactorSpec, FreeProduct, WordError, block_length, enumerate_ball, partition_by, shape, word_length
from .op_verifier import (
    VerifierError,
    antipode_transform,
    check_hplus_relations,
    check_kplus_relations,
    counit_transform,
    lemma52_suite,
    tensor_composite,
)
from .partition_category import (
    PartitionError,
    enumerate_partitions,
    pair_predicate,
    span_containment_check,
    t_pi,
)
from .scalars import CycloNumber, format_cyclo
from .serialization import FormatError
from .symmetry_search import color_automorphisms

EXIT_OK, EXIT_INPUT, EXIT_FAIL = 0, 1, 2

INPUT_ERRORS = (FormatError, FiltrationError, VerifierError, PartitionError, WordError, GroupError,
                AlgebraError, OSError, KeyError, TypeError, ValueError)


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# -- rendering ---------------------------------------------------------------------------


def _fmt_entry(x) -> str:
    if isinstance(x, CycloNumber):
        return format_cyclo(x)
    z = complex(x)
    if abs(z.imag) < 1e-12:
        r = z.real
        return "0" if abs(r) < 1e-12 else f"{r:.6g}"
    return f"{z.real:.6g}{z.imag:+.6g}i"


def format_grid(m) -> str:
    """Right-aligned columns, one row per line; exact entries as fractions like -1/4."""
    m = np.asarray(m)
    cells = [[_fmt_entry(x) for x in row] for row in m]
    if not cells:
        return ""
    widths = [max(len(r[j]) for r in cells) for j in range(len(cells[0]))]
    return "\n".join(" ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells)


def _text(report, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    for key, val in report.items():
        if isinstance(val, np.ndarray) and val.ndim == 2:
            lines.append(f"{pad}{key}:")
            lines.extend(pad + "  " + row for row in format_grid(val).splitlines())
        elif isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_text(val, indent + 1))
        elif isinstance(val, list) and val and all(isinstance(v, dict) for v in val):
            lines.append(f"{pad}{key}:")
            for v in val:
                sub = _text(v, indent + 2)
                sub[0] = pad + "  - " + sub[0].lstrip()
                lines.extend(sub)
        else:
            lines.append(f"{pad}{key}: {json.dumps(serialization.to_jsonable(val))}")
    return lines


def render(report: dict, fmt: str) -> str:
    if fmt == "text":
        return "\n".join(_text(report)) + "\n"
    return json.dumps(serialization.to_jsonable(report), indent=2, sort_keys=True) + "\n"


# -- inputs ----------------------------------------------------------------------------------


def _load_json(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"expected comma separated integers, got {s!r}") from exc


def _factor_specs(s: str) -> list[FactorSpec]:
    out = []
    for tok in s.split(","):
        tok = tok.strip()
        if tok in ("inf", "Z"):
            out.append(FactorSpec.infinite())
        else:
            try:
                out.append(FactorSpec.cyclic(int(tok)))
            except ValueError as exc:
                raise InputError(f"bad factor {tok!r}; use inf or an integer order") from exc
    if not out:
        raise InputError("at least one factor is required")
    return out


def _group(spec: str):
    from .algebra_core import abelian_group, cyclic_group, dihedral_group_d4, symmetric_group_s3

    if spec == "S3":
        return symmetric_group_s3()
    if spec == "D4":
        return dihedral_group_d4()
    kind, _, rest = spec.partition(":")
    if kind == "abelian":
        return abelian_group(_int_list(rest))
    if kind == "cyclic":
        return cyclic_group(int(rest))
    raise InputError(f"unknown group {spec!r}; use S3, D4, cyclic:N or abelian:r1,r2,..")


# -- commands --------------------------------------------------------------------------------


def _minimal_bound(f) -> int | None:
    top = max(f.levels) - min(f.levels)
    for m in range(top + 1):
        if spectral_triple_type_check(f, m).ok:
            return m
    return None


def cmd_filtration_analyze(args) -> tuple[dict, bool]:
    f = serialization.decode_filtration(_load_json(args.file))
    rep = validate(f, args.tol)
    report: dict = {
        "dims": f.dims,
        "labels": [str(x) for x in f.labels],
        "valid": rep.valid,
        "violations": [{"kind": v.kind, "indices": list(v.indices), "message": v.message} for v in rep.violations],
    }
    if not rep.valid:
        return report, False
    ps = f.projections()
    report["projections"] = {f"P{i}": p for i, p in enumerate(ps)}
    weights = _int_list(args.weights) if args.weights else None
    q = q_matrix(f, weights)
    report["Q"] = q
    report["Q_colors"] = [
        {"value": _fmt_entry(v[1] if isinstance(v, tuple) else v), "diagonal": bool(v[0]) if isinstance(v, tuple) else None,
         "positions": int(np.sum(c))}
        for v, c in color_components(q, split_diagonal=True, tol=args.tol)
    ]
    if f.algebra.dim <= 64:
        joint = ColoredMatrix.joint([ColoredMatrix.from_matrix(p, tol=args.tol) for p in ps])
        report["classical_symmetry_order"] = color_automorphisms(joint).order
    report["vdw"] = {f"V{i}": vdw_parameter(f, i, exact=f.exact) for i in range(len(f.parts))}
    report["tracial"] = f.algebra.is_tracial()
    dirac = dirac_operator(f)
    report["commutator_norms"] = [round(x, 12) for x in dirac.norms()]
    m = _minimal_bound(f)
    report["spectral_triple_bound"] = m
    if m is not None:
        report["band_violation"] = band_violation(f, m)
    return report, True


def cmd_dual_qiso(args) -> tuple[dict, bool]:
    factors = tuple(_int_list(args.factors))
    if not factors:
        raise InputError("--factors needs at least one order")
    g = FiniteAbelianGroup(factors)
    if g.order > args.max_order:
        raise InputError(f"group order {g.order} exceeds --max-order {args.max_order}")
    rep = color_reduction(g)
    report = {
        "factors": list(factors),
        "order": g.order,
        "coincide": rep.coincide,
        "q_classes": rep.n_classes_q,
        "distance_classes": rep.n_classes_r,
    }
    if args.automorphisms:
        joint = ColoredMatrix.joint([ColoredMatrix.from_matrix(q) for q in rep.q_matrices])
        report["automorphism_order"] = color_automorphisms(joint).order
    if args.show_q:
        report["Q"] = {f"Q{i}": q for i, q in enumerate(rep.q_matrices)}
    return report, rep.coincide


def cmd_dual_conjecture(args) -> tuple[dict, bool]:
    rows = conjecture_experiment(_int_list(args.rs), _int_list(args.ks))
    return {"rows": rows}, True


def cmd_words_partition(args) -> tuple[dict, bool]:
    group = FreeProduct(_factor_specs(args.factors))
    ball = enumerate_ball(group, args.radius, max_size=args.max_size)
    classes = partition_by(ball, args.mode)
    out = []
    for key in sorted(classes, key=lambda k: (k if isinstance(k, tuple) else (k,))):
        entry = {"key": list(key) if isinstance(key, tuple) else key, "size": len(classes[key])}
        if args.list:
            entry["words"] = [group.format(w) for w in classes[key]]
        out.append(entry)
    report: dict = {"radius": args.radius, "mode": args.mode, "ball_size": len(ball), "classes": out}
    if args.word:
        w = group.parse(args.word)
        report["word"] = {"word": group.format(w), "length": word_length(w), "blocks": block_length(w),
                          "shape": list(shape(w))}
    return report, True


def _relations(u) -> dict:
    h, k = check_hplus_relations(u), check_kplus_relations(u)
    return {"hplus": {"ok": h.ok, "violations": h.violations},
            "kplus": {"ok": k.ok, "violations": k.violations}}


def cmd_verify(args) -> tuple[dict, bool]:
    if args.fleet:
        fleet = build_fleet(args.seed)
        rows, ok = [], True
        for i, inst in enumerate(fleet):
            u = inst.matrix.with_tol(args.tol if args.tol is not None else 1e-9)
            lr = lemma52_suite(u)
            ok &= lr.agree
            rows.append({"index": i, "family": inst.family, "flags": list(lr.flags), "agree": lr.agree})
        return {"seed": args.seed, "instances": len(rows), "all_agree": ok, "results": rows}, ok
    if not args.file:
        raise InputError("verify needs an operator matrix file or --fleet")
    u = serialization.decode_operator_matrix(_load_json(args.file))
    if args.tol is not None:
        u = u.with_tol(args.tol)
    report: dict = {"n": u.n, "m": u.m, "tolerance": u.tol}
    ok = True
    if args.suite in ("relations", "all"):
        report.update(_relations(u))
        ok &= report["hplus"]["ok"] and report["kplus"]["ok"]
    if args.suite in ("lemma", "all"):
        lr = lemma52_suite(u)
        report["lemma"] = {
            "flags": {"intertwiner": lr.intertwiner.ok, "normal": lr.normal.ok, "block2": lr.block2.ok},
            "violations": {"intertwiner": lr.intertwiner.violation, "normal": lr.normal.violation,
                           "block2": lr.block2.violation},
            "agree": lr.agree,
        }
        ok &= lr.agree
    if args.suite in ("composites", "all"):
        comps = {}
        for name, v in (("antipode", antipode_transform(u)), ("counit", counit_transform(u)),
                        ("square", tensor_composite(u, u))):
            r = check_kplus_relations(v.with_tol(10 * u.tol))
            comps[name] = {"kplus": r.ok, "violations": r.violations}
            ok &= r.ok
        report["composites"] = comps
    return report, ok


def cmd_partitions(args) -> tuple[dict, bool]:
    k, l = args.k, args.l
    if args.uncolored:
        shapes = enumerate_partitions(k, l, colored=False, max_points=args.max_points)
        if args.pairs:
            shapes = [b for b in shapes if all(len(x) == 2 for x in b)]
        return {"k": k, "l": l, "count": len(shapes), "partitions": [[list(b) for b in s] for s in shapes]}, True
    ps = enumerate_partitions(k, l, max_points=args.max_points)
    if args.pairs:
        ps = [p for p in ps if pair_predicate(p)]
    report: dict = {"k": k, "l": l, "count": len(ps)}
    if args.render:
        report["diagrams"] = [p.render() for p in ps]
    else:
        report["partitions"] = [p.to_dict() for p in ps]
    if args.tpi is not None:
        report["t_pi"] = [{"partition": p.to_dict(), "matrix": t_pi(p, args.tpi).astype(int)} for p in ps]
    if not args.matrix:
        return report, True
    u = serialization.decode_operator_matrix(_load_json(args.matrix))
    kp = check_kplus_relations(u)
    if not kp.ok:
        raise InputError("span containment needs a matrix satisfying the K+ relations")
    sr = span_containment_check(ps, u, k, l, args.tol)
    report["span"] = {"passed": sr.passed, "violations": sr.violations, "rank": sr.rank,
                      "solution_dim": sr.solution_dim}
    return report, sr.all_pass


def cmd_ergodic_spectral(args) -> tuple[dict, bool]:
    g = _group(args.group)
    subs = regular_spectral_decomposition(g)
    report: dict = {
        "group": g.name or args.group,
        "order": g.order,
        "subspaces": [{"label": s.label, "dimension": s.dimension} for s in subs],
    }
    ok = True
    if args.support:
        dims = _int_list(args.support)
        if len(dims) != g.order:
            raise InputError(f"--support needs {g.order} multiplicities")
        sc = support_subgroup_check(g, dims)
        report["support"] = {"subgroup": sc.ok, "offending": sc.offending, "reason": sc.reason}
        ok = sc.ok
    if args.projections:
        report["projections"] = {s.label: s.projection for s in subs}
    return report, ok


# -- parser --------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-9, help="numerical tolerance")
    common.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED, help="seed for generated instances")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")

    p = _Parser(prog="qsymfilt", description="Orthogonal filtrations and their quantum symmetries.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    fl = sub.add_parser("filtration").add_subparsers(dest="action", required=True, parser_class=_Parser)
    a = fl.add_parser("analyze", parents=[common], help="validate a filtration and derive its invariants")
    a.add_argument("file")
    a.add_argument("--weights", help="comma separated distinct weights for Q")
    a.set_defaults(func=cmd_filtration_analyze)

    du = sub.add_parser("dual").add_subparsers(dest="action", required=True, parser_class=_Parser)
    a = du.add_parser("qiso", parents=[common], help="compare Q colour classes with Cayley distance classes")
    a.add_argument("--factors", required=True, help="cyclic orders, e.g. 2,2,2")
    a.add_argument("--automorphisms", action="store_true", help="also compute the classical symmetry group order")
    a.add_argument("--show-q", action="store_true")
    a.add_argument("--max-order", type=int, default=256)
    a.set_defaults(func=cmd_dual_qiso)
    a = du.add_parser("conjecture", parents=[common], help="tabulate Z_r^k coincidences")
    a.add_argument("--rs", default="2,3,4,5")
    a.add_argument("--ks", default="1,2,3")
    a.set_defaults(func=cmd_dual_conjecture)

    wo = sub.add_parser("words").add_subparsers(dest="action", required=True, parser_class=_Parser)
    a = wo.add_parser("partition", parents=[common], help="split a ball of reduced words into classes")
    a.add_argument("--factors", default="inf,inf", help="inf or cyclic orders, e.g. 2,3")
    a.add_argument("--radius", type=int, default=4)
    a.add_argument("--mode", choices=("length", "length-and-block", "shape"), default="shape")
    a.add_argument("--word", help="also report l, b and shape of this word, e.g. g1^2.g2^3.g1")
    a.add_argument("--list", action="store_true", help="list the words in each class")
    a.add_argument("--max-size", type=int, default=10**6)
    a.set_defaults(func=cmd_words_partition)

    a = sub.add_parser("verify", parents=[common], help="check relations of an operator matrix")
    a.add_argument("file", nargs="?")
    a.add_argument("--suite", choices=("relations", "lemma", "composites", "all"), default="all")
    a.add_argument("--fleet", action="store_true", help="run the equivalence suite on the seeded fleet")
    a.set_defaults(func=cmd_verify, tol=None)

    a = sub.add_parser("partitions", parents=[common], help="enumerate coloured noncrossing partitions")
    a.add_argument("--k", type=int, required=True)
    a.add_argument("--l", type=int, required=True)
    a.add_argument("--pairs", action="store_true", help="pair partitions only")
    a.add_argument("--uncolored", action="store_true")
    a.add_argument("--render", action="store_true")
    a.add_argument("--tpi", type=int, metavar="N", help="include T_pi matrices for this n")
    a.add_argument("--matrix", help="operator matrix file for the intertwiner span check")
    a.add_argument("--max-points", type=int, default=8)
    a.set_defaults(func=cmd_partitions, tol=1e-8)

    er = sub.add_parser("ergodic").add_subparsers(dest="action", required=True, parser_class=_Parser)
    a = er.add_parser("spectral", parents=[common], help="isotypic decomposition of C(G) under translation")
    a.add_argument("--group", default="S3", help="S3, D4, cyclic:N or abelian:r1,r2,..")
    a.add_argument("--support", help="multiplicity per group element, checked for subgroup support")
    a.add_argument("--projections", action="store_true")
    a.set_defaults(func=cmd_ergodic_spectral)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        report, ok = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except INPUT_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = render(report, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
