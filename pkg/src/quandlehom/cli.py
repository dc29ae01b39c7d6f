"""Batch command line: construct, compute, verify, predict, compare.

Exit codes: 0 success, 1 identity failure, 2 invalid input, 3 resource
cap exceeded, 4 prediction mismatch.  Identical configurations (seed
included) produce byte-identical JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .analysis import (
    bockstein_reduced_exactness,
    compare_all,
    homology_table,
    is_odd_prime,
    quandle_homology_table,
)
from .complexes import (
    CellCapExceededError,
    DEFAULT_CELL_CAP,
    RackSpace,
    Ring,
    SparseMatrix,
    boundary_matrices,
    d_matrix,
    p_matrix,
    psi_matrix,
    verify_chain_map,
)
from .cup import OperatorCalculus, identity_suite
from .quandles import (
    FiniteQuandle,
    InvalidStructureError,
    build_alexander,
    build_dihedral,
    build_trivial,
    check_axioms,
    classify,
    inner_group,
    load_quandle,
    make_xset,
)
from .triangulation import triangulate_compare

EXIT_OK = 0
EXIT_IDENTITY = 1
EXIT_INVALID = 2
EXIT_CAP = 3
EXIT_MISMATCH = 4

SCHEMA = "qh/1"


def _add_quandle_flags(ap: argparse.ArgumentParser) -> None:
    g = ap.add_mutually_exclusive_group(required=True)
    g.add_argument("--dihedral", type=int, metavar="P", help="dihedral quandle on Z/P")
    g.add_argument("--trivial", type=int, metavar="N", help="trivial quandle on N elements")
    g.add_argument(
        "--alexander",
        type=int,
        nargs=2,
        metavar=("N", "T"),
        help="Alexander quandle on Z/N with multiplier T",
    )
    g.add_argument("--file", type=str, help="quandle JSON file {size, table}")


def _resolve_quandle(args: argparse.Namespace) -> FiniteQuandle:
    if args.dihedral is not None:
        return build_dihedral(args.dihedral)
    if args.trivial is not None:
        return build_trivial(args.trivial)
    if args.alexander is not None:
        return build_alexander(args.alexander[0], args.alexander[1])
    return load_quandle(args.file)


def _cell_cap(args: argparse.Namespace) -> int:
    env = os.environ.get("QH_CELL_CAP")
    if args.cell_cap is not None:
        return args.cell_cap
    if env is not None:
        return int(env)
    return DEFAULT_CELL_CAP


def _auto_prime(q: FiniteQuandle, coeff: str) -> Ring:
    if coeff != "auto":
        return Ring.parse(coeff)
    if is_odd_prime(q.size):
        return Ring(q.size)
    return Ring(3)


def _emit(payload: dict, fmt: str, table_text: Optional[str] = None) -> None:
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    else:
        print(table_text if table_text is not None else json.dumps(payload, indent=2, sort_keys=True))


def cmd_info(args: argparse.Namespace) -> int:
    try:
        q = _resolve_quandle(args)
    except (InvalidStructureError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"invalid quandle: {exc}", file=sys.stderr)
        return EXIT_INVALID
    report = check_axioms(q)
    if not report.is_rack:
        print("invalid quandle:", file=sys.stderr)
        for line in report.failures[:5]:
            print(f"  {line}", file=sys.stderr)
        return EXIT_INVALID
    aug = inner_group(q)
    cls = classify(q, aug)
    payload = {
        "schema": SCHEMA,
        "command": "info",
        "size": q.size,
        "is_rack": report.is_rack,
        "is_quandle": report.is_quandle,
        "inner_order": cls.inner_order,
        "connected": cls.connected,
        "faithful": cls.faithful,
        "regular": cls.regular,
        "orbits": [list(o) for o in cls.orbits],
    }
    kind = "quandle" if report.is_quandle else "rack"
    text = (
        f"{kind}, size {q.size}, |Inn|={cls.inner_order}, "
        f"connected: {str(cls.connected).lower()}, "
        f"faithful: {str(cls.faithful).lower()}, "
        f"regular: {str(cls.regular).lower()}\n"
        f"orbits: {[list(o) for o in cls.orbits]}"
    )
    _emit(payload, args.format, text)
    return EXIT_OK


def cmd_homology(args: argparse.Namespace) -> int:
    try:
        q = _resolve_quandle(args)
        ring = Ring.parse(args.coeff) if args.coeff != "auto" else _auto_prime(q, "auto")
    except (InvalidStructureError, FileNotFoundError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    cap = _cell_cap(args)
    aug = inner_group(q)
    tag = {"bx": "point", "bxx": "self", "bgx": "group"}[args.space]
    space = RackSpace(make_xset(aug, tag), cap)
    try:
        if args.theory == "quandle":
            if args.space != "bx":
                print("quandle theory lives on the point space (--space bx)", file=sys.stderr)
                return EXIT_INVALID
            rows = quandle_homology_table(space, ring, args.max_degree)
            payload_rows = []
            split_ok = True
            for r in rows:
                split_ok = split_ok and r.splits
                payload_rows.append(
                    {
                        "degree": r.degree,
                        "rack": r.rack.to_json_dict(),
                        "quandle": r.quandle.to_json_dict(),
                        "degenerate": r.degenerate.to_json_dict(),
                        "splits": r.splits,
                    }
                )
            payload = {
                "schema": SCHEMA,
                "command": "homology",
                "theory": "quandle",
                "ring": str(ring),
                "space": args.space,
                "rows": payload_rows,
                "splitting_ok": split_ok,
            }
            lines = [f"{'n':>3} {'rack':>18} {'quandle':>18} {'degenerate':>18} split"]
            for r in rows:
                lines.append(
                    f"{r.degree:>3} {str(r.rack):>18} {str(r.quandle):>18} "
                    f"{str(r.degenerate):>18} {r.splits}"
                )
            _emit(payload, args.format, "\n".join(lines))
            return EXIT_OK if split_ok else EXIT_IDENTITY
        results = homology_table(space, ring, args.max_degree)
    except CellCapExceededError as exc:
        print(f"cell cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    payload = {
        "schema": SCHEMA,
        "command": "homology",
        "theory": "rack",
        "ring": str(ring),
        "space": args.space,
        "rows": [r.to_json_dict() for r in results],
    }
    _emit(payload, args.format, "\n".join(str(r) for r in results))
    return EXIT_OK


def _verify_chain(q: FiniteQuandle, args, cap: int, corrupt: bool) -> dict:
    aug = inner_group(q)
    maxd = args.max_degree
    spaces = {t: RackSpace(make_xset(aug, t), cap) for t in ("point", "self", "group")}
    failures = []
    for tag, space in spaces.items():
        for n in range(1, maxd + 1):
            hi, lo = space.slice(n), space.slice(n - 1)
            checks = {
                "d0d0": (lo.d0 @ hi.d0).is_zero(),
                "d1d1": (lo.d1 @ hi.d1).is_zero(),
                "d0d1+d1d0": ((lo.d0 @ hi.d1) + (lo.d1 @ hi.d0)).is_zero(),
                "dd": (lo.d @ hi.d).is_zero(),
            }
            for name, ok in checks.items():
                if not ok:
                    failures.append({"space": tag, "degree": n, "identity": name})
    sf = make_xset(aug, "self")
    src = {n: spaces["point"].slice(n) for n in range(maxd + 1)}
    dst = {n: spaces["self"].slice(n) for n in range(maxd + 1)}
    psi = {n: psi_matrix(sf, n) for n in range(1, maxd + 1)}
    if corrupt and 2 in psi:
        # deliberate corruption hook for exercising the failure path
        m = psi[2]
        bad = SparseMatrix(
            m.shape, m.rows, m.cols, np.where(np.arange(m.nnz) == 0, -m.vals, m.vals)
        )
        psi[2] = bad
    ok_psi, wit_psi = verify_chain_map(psi, src, dst, degree_shift=-1)
    if not ok_psi:
        failures.append({"map": "psi", "witness": list(wit_psi)})
    pmaps = {n: p_matrix(sf, n) for n in range(maxd + 1)}
    ok_p, wit_p = verify_chain_map(pmaps, dst, dst, degree_shift=-1)
    if not ok_p:
        failures.append({"map": "P", "witness": list(wit_p)})
    if check_axioms(q).is_quandle:
        dmaps = {n: d_matrix(sf, n) for n in range(maxd)}
        ok_d, wit_d = verify_chain_map(dmaps, dst, dst, degree_shift=+1)
        if not ok_d:
            failures.append({"map": "D", "witness": list(wit_d)})
        for n in range(maxd):
            pd = p_matrix(sf, n + 1) @ d_matrix(sf, n)
            ident = SparseMatrix.from_dense(np.eye(pd.shape[0], dtype=np.int64))
            if pd != ident:
                failures.append({"map": "PD", "degree": n})
    return {"suite": "chain", "failures": failures, "ok": not failures}


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        q = _resolve_quandle(args)
        ring = _auto_prime(q, args.coeff)
    except (InvalidStructureError, FileNotFoundError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    cap = _cell_cap(args)
    suites = (
        ["chain", "cup", "triangulation", "bockstein"]
        if args.suite == "all"
        else [args.suite]
    )
    reports = []
    try:
        for suite in suites:
            if suite == "chain":
                reports.append(_verify_chain(q, args, cap, args.corrupt))
            elif suite == "cup":
                aug = inner_group(q)
                calc = OperatorCalculus(aug, ring.p, cap)
                rep = identity_suite(
                    calc, max_degree=args.max_degree, trials=args.trials, seed=args.seed
                )
                reports.append({"suite": "cup", **rep.to_json_dict()})
            elif suite == "triangulation":
                aug = inner_group(q)
                space = RackSpace(make_xset(aug, "point"), cap)
                rep = triangulate_compare(
                    space,
                    min(args.max_degree, 4),
                    ring.p,
                    trials=max(1, args.trials // 10),
                    seed=args.seed,
                )
                reports.append({"suite": "triangulation", **rep.to_json_dict()})
            elif suite == "bockstein":
                aug = inner_group(q)
                space = RackSpace(make_xset(aug, "point"), cap)
                if is_odd_prime(q.size) and ring.p == q.size:
                    br = bockstein_reduced_exactness(space, ring.p, args.max_degree - 1)
                    reports.append(
                        {
                            "suite": "bockstein",
                            "square_zero_ok": br.square_zero_ok,
                            "rows": br.rows,
                            "ok": br.exact,
                        }
                    )
                else:
                    br = bockstein_reduced_exactness(space, ring.p, 2)
                    reports.append(
                        {
                            "suite": "bockstein",
                            "square_zero_ok": br.square_zero_ok,
                            "rows": br.rows,
                            "ok": br.square_zero_ok,
                        }
                    )
            else:
                print(f"unknown suite {suite!r}", file=sys.stderr)
                return EXIT_INVALID
    except CellCapExceededError as exc:
        print(f"cell cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    all_ok = all(r.get("ok") for r in reports)
    payload = {
        "schema": SCHEMA,
        "command": "verify",
        "ring": str(ring),
        "seed": args.seed,
        "trials": args.trials,
        "ok": all_ok,
        "reports": reports,
    }
    _emit(payload, args.format)
    if not all_ok:
        print(f"verification failed; replay with --seed {args.seed}", file=sys.stderr)
        return EXIT_IDENTITY
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    try:
        q = _resolve_quandle(args)
        ring = _auto_prime(q, args.coeff)
    except (InvalidStructureError, FileNotFoundError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    cap = _cell_cap(args)
    try:
        rep = compare_all(
            q,
            ring.p,
            args.max_degree,
            with_torsion=args.with_torsion,
            cell_cap=cap,
        )
    except CellCapExceededError as exc:
        print(f"cell cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    tables = {
        "point_space": rep.point_table,
        "self_space": rep.self_table,
        "group_space": rep.group_table,
        "quandle": rep.quandle_table,
    }
    if rep.torsion_table is not None:
        tables["torsion_counts"] = rep.torsion_table
    payload = {
        "schema": SCHEMA,
        "command": "compare",
        "ring": str(ring),
        "predictions_apply": rep.predictions_apply,
        "shift_iso_ok": rep.shift_iso_ok,
        "cover_iso_ok": rep.cover_iso_ok,
        "ok": rep.ok,
        "tables": {k: t.to_json_dict() for k, t in tables.items()},
    }
    text_parts = []
    for name, t in tables.items():
        text_parts.append(f"== {name}")
        text_parts.append(t.to_text())
    text_parts.append(f"shift iso: {rep.shift_iso_ok}   cover iso: {rep.cover_iso_ok}")
    if not rep.predictions_apply:
        text_parts.append("predictions: N/A (not an odd-prime dihedral quandle)")
    _emit(payload, args.format, "\n".join(text_parts))
    if not rep.ok:
        bad = rep.mismatched_degrees()
        print(f"prediction mismatch at: {bad}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qh",
        description="Exact homology, cohomology and cup products of finite racks and quandles.",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, with_degree: bool = True) -> None:
        _add_quandle_flags(p)
        p.add_argument("--format", choices=("json", "table"), default="json")
        p.add_argument("--cell-cap", type=int, default=None, help="max cells per degree")
        if with_degree:
            p.add_argument("--max-degree", type=int, default=4)

    p_info = sub.add_parser("info", help="axioms, inner group, classification")
    common(p_info, with_degree=False)
    p_info.set_defaults(func=cmd_info)

    p_hom = sub.add_parser("homology", help="homology/cohomology tables")
    common(p_hom)
    p_hom.add_argument("--theory", choices=("rack", "quandle"), default="rack")
    p_hom.add_argument("--coeff", default="auto", help="z or f<p> (default: auto)")
    p_hom.add_argument(
        "--space", choices=("bx", "bxx", "bgx"), default="bx",
        help="point, self-action, or group space",
    )
    p_hom.set_defaults(func=cmd_homology)

    p_ver = sub.add_parser("verify", help="run exact identity suites")
    common(p_ver)
    p_ver.add_argument(
        "--suite",
        choices=("chain", "cup", "triangulation", "bockstein", "all"),
        default="all",
    )
    p_ver.add_argument("--coeff", default="auto")
    p_ver.add_argument("--trials", type=int, default=100)
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    p_ver.set_defaults(func=cmd_verify)

    p_cmp = sub.add_parser("compare", help="predicted versus computed dimensions")
    common(p_cmp)
    p_cmp.add_argument("--coeff", default="auto")
    p_cmp.add_argument("--with-torsion", action="store_true")
    p_cmp.set_defaults(func=cmd_compare)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "max_degree", 0) < 0:
        print("max degree must be >= 0", file=sys.stderr)
        return EXIT_INVALID
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
