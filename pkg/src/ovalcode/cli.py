"""Command-line front end: construct, region, decode-sweep.

Outputs are deterministic for a fixed configuration (sorted JSON keys, no
timestamps), inputs are validated before anything is written, and files go
through a temp-and-rename so failures never leave partial outputs behind.

Exit codes: 0 success, 2 invalid input, 3 I/O failure, 4 LP size cap
exceeded, 5 decoding failure within the guaranteed error bound.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .gf import FieldCtx, NonPrimeCharacteristic, SizeCapExceeded, field_for_order, field_new
from .oval import FieldTooSmall, internal_points, vandermonde_oval
from .construct import (
    GeneratorMatrix,
    RecoverySystem,
    basis_from_points,
    build_generator,
    find_internal_basis,
    recovery_pairs,
)
from .mld import exhaustive_error_sweep, find_counterexample, all_messages, mld_bound, seeded_messages
from .srr import (
    FeasibilityOracle,
    ProblemTooLarge,
    ServiceSystem,
    eq4_divergence_report,
    normalized_cost,
    oracle_region,
    oval_region,
    rate_vector,
    region_compare,
    uniform_allocation,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_LP_CAP = 4
EXIT_DECODE_FAILURE = 5


class UsageError(ValueError):
    pass


def _json_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write_atomic(path: str, content: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(content)
    os.replace(tmp, path)


def _field_from_args(args) -> FieldCtx:
    if args.q is not None:
        if args.p is not None or args.m is not None:
            raise UsageError("give either --q or --p/--m, not both")
        return field_for_order(args.q)
    if args.p is None:
        raise UsageError("one of --q or --p is required")
    return field_new(args.p, args.m if args.m is not None else 1)


def _parse_basis(text: str):
    points = []
    for chunk in text.split(";"):
        coords = [int(x) for x in chunk.split(",")]
        if len(coords) != 3:
            raise UsageError(f"basis point {chunk!r} is not a coordinate triple")
        points.append(tuple(coords))
    if len(points) != 3:
        raise UsageError("a basis needs exactly three points")
    return points


def _parse_rates(text: str):
    parts = [Fraction(x.strip()) for x in text.split(",")]
    if len(parts) != 3:
        raise UsageError(f"expected three rates, got {text!r}")
    return rate_vector(parts)


def _matrix_file(ctx: FieldCtx, rows) -> str:
    n = len(rows[0])
    k = len(rows)
    header = f"{ctx.p} {ctx.m} {ctx.modulus_int()} {n} {k}"
    body = "\n".join(" ".join(str(v) for v in row) for row in rows)
    return header + "\n" + body + "\n"


def _build_system(ctx: FieldCtx, args) -> tuple[GeneratorMatrix, RecoverySystem]:
    code = vandermonde_oval(ctx)
    if getattr(args, "basis", None):
        basis = basis_from_points(code, _parse_basis(args.basis))
    elif args.strategy == "seeded":
        if args.seed is None:
            raise UsageError("--strategy seeded requires --seed")
        basis = find_internal_basis(code, "seeded", seed=args.seed)
    else:
        basis = find_internal_basis(code, "scan")
    gm = build_generator(code, basis)
    return gm, recovery_pairs(gm)


def cmd_construct(args) -> int:
    ctx = _field_from_args(args)
    gm, rs = _build_system(ctx, args)
    code = gm.oval
    n_internal = len(internal_points(code))

    summary = {
        "q": ctx.q,
        "n": gm.n,
        "internal_points": n_internal,
        "basis": [list(p.coords) for p in gm.basis.points],
        "partitions": {
            str(obj): [sorted(p.servers) for p in rs.pairs_for(obj)] for obj in (1, 2, 3)
        },
    }

    outputs = {
        "F.txt": _matrix_file(ctx, code.F),
        "B.txt": _matrix_file(ctx, gm.basis.B),
        "G.txt": _matrix_file(ctx, gm.G),
        "recovery.json": _json_dumps(rs.to_json_obj()),
    }
    os.makedirs(args.out, exist_ok=True)
    written = {}
    for name, content in outputs.items():
        path = os.path.join(args.out, name)
        _write_atomic(path, content)
        written[name] = path
    summary["files"] = written

    if args.format == "csv":
        lines = ["key,value"]
        for key in ("q", "n", "internal_points"):
            lines.append(f"{key},{summary[key]}")
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        sys.stdout.write(_json_dumps(summary))
    return EXIT_OK


def cmd_region(args) -> int:
    ctx = _field_from_args(args)
    gm, rs = _build_system(ctx, args)
    n = gm.n
    grid = Fraction(args.grid)
    report: dict = {"q": ctx.q, "n": n, "region": oval_region(n).to_json_obj()}

    if args.member:
        lam = _parse_rates(args.member)
        system = ServiceSystem.from_generator(gm)
        res = FeasibilityOracle(system).result(lam)
        entry: dict = {"point": [str(x) for x in lam], "feasible": res.feasible}
        if res.feasible:
            entry["witness"] = res.witness.to_json_obj()
            if sum(lam) > 0:
                uniform = uniform_allocation(lam, rs)
                entry["uniform_cost"] = str(normalized_cost(uniform).cost)
        report["member"] = entry

    if args.compare_systematic:
        from .construct import systematic_form

        sys_rows = systematic_form(gm.oval)
        sys_system = ServiceSystem.from_matrix(sys_rows, ctx)
        cmp = region_compare(
            oval_region(n), oracle_region(sys_system), resolution=grid
        )
        obj = cmp.to_json_obj()
        obj["verdict"] = {
            "equal": "oval = systematic",
            "A < B": "oval < systematic",
            "A > B": "oval > systematic",
            "incomparable": "incomparable",
        }[cmp.verdict]
        report["compare_systematic"] = obj

    if args.eq4_report:
        from .construct import systematic_form

        sys_rows = systematic_form(gm.oval)
        sys_system = ServiceSystem.from_matrix(sys_rows, ctx)
        div = eq4_divergence_report(n, sys_system, step=grid)
        _write_atomic(args.eq4_report, _json_dumps(div))
        report["eq4_report"] = {
            "path": args.eq4_report,
            "points": div["points"],
            "disagreement_count": div["disagreement_count"],
        }

    out_text = _json_dumps(report)
    if args.out:
        _write_atomic(args.out, out_text)
    sys.stdout.write(out_text)
    return EXIT_OK


def cmd_decode_sweep(args) -> int:
    ctx = _field_from_args(args)
    gm, rs = _build_system(ctx, args)
    t_max = mld_bound(gm.n, 2, 4)
    weight = args.weight if args.weight is not None else t_max

    if args.messages == "all":
        messages = all_messages(ctx)
    else:
        try:
            count = int(args.messages)
        except ValueError:
            raise UsageError(f"--messages must be 'all' or an integer, got {args.messages!r}")
        messages = seeded_messages(ctx, count, args.seed)

    sweep = exhaustive_error_sweep(gm, rs, weight, messages)
    counter = find_counterexample(gm, rs, t_max + 1, messages[:1] or [(0, 0, 0)])
    report = sweep.to_json_obj()
    report["counterexample_weight"] = t_max + 1
    report["counterexample"] = counter
    report["messages"] = len(messages)
    report["seed"] = args.seed

    out_text = _json_dumps(report)
    if args.out:
        _write_atomic(args.out, out_text)
    if args.format == "csv":
        lines = ["error_positions,error_values,object,got,expected"]
        for f in sweep.failures:
            lines.append(
                ";".join(map(str, f["error_positions"]))
                + "," + ";".join(map(str, f["error_values"]))
                + f",{f['object']},{f['got']},{f['expected']}"
            )
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        sys.stdout.write(out_text)
    return EXIT_DECODE_FAILURE if sweep.failures else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ovalcode",
        description="Oval-based MDS storage matrices: construction, service regions, decoding",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_field_args(p):
        p.add_argument("--q", type=int, help="field size (prime power, >= 4)")
        p.add_argument("--p", type=int, help="prime characteristic (with --m)")
        p.add_argument("--m", type=int, help="extension degree (with --p)")
        p.add_argument("--strategy", choices=["scan", "seeded"], default="scan")
        p.add_argument("--seed", type=int, default=None, help="seed for --strategy seeded")
        p.add_argument("--basis", help='explicit internal basis "x,y,z;x,y,z;x,y,z"')

    c = sub.add_parser("construct", help="build F, B, G and the recovery system")
    add_field_args(c)
    c.add_argument("--out", default=".", help="output directory")
    c.add_argument("--format", choices=["json", "csv"], default="json")
    c.set_defaults(func=cmd_construct)

    r = sub.add_parser("region", help="service-rate-region analysis")
    add_field_args(r)
    r.add_argument("--member", help='demand triple "a,b,c" (rationals allowed)')
    r.add_argument("--compare-systematic", action="store_true")
    r.add_argument("--grid", default="1/6", help="grid resolution (rational)")
    r.add_argument("--eq4-report", help="write the closed-form divergence report here")
    r.add_argument("--out", help="also write the report to this path")
    r.add_argument("--format", choices=["json", "csv"], default="json")
    r.set_defaults(func=cmd_region)

    d = sub.add_parser("decode-sweep", help="exhaustive majority-logic decode sweeps")
    add_field_args(d)
    d.add_argument("--messages", default="100", help="'all' or a sample size")
    d.add_argument("--weight", type=int, default=None, help="max error weight (default: the bound)")
    d.add_argument("--out", help="write the JSON report here")
    d.add_argument("--format", choices=["json", "csv"], default="json")
    d.set_defaults(func=cmd_decode_sweep, seed=0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ProblemTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LP_CAP
    except (UsageError, NonPrimeCharacteristic, SizeCapExceeded, FieldTooSmall, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
