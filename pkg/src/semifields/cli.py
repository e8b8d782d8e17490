"""Command-line pipeline: search, classify, report, inspect, bench.

All stages are deterministic: no seeds, no unordered iteration in any
output path, and sharded runs merge to byte-identical files.
"""

from __future__ import annotations

import argparse
import sys

from .algebra import InvalidTuple, StandardSet, predicates
from .classify import (
    Census,
    NotRightPrimitive,
    at_order,
    canonical_key,
    isotope_inventory,
    s3_orbit_structure,
)
from .fixtures import PLANES, SPEC_81
from .gf import FieldSpec, char_poly
from .report import (
    CensusReport,
    build_table1,
    inventory_string,
    read_code_tuples,
    read_header,
    render_table1,
    render_table2,
    write_iso_class_file,
    write_plane_class_file,
)
from .search import run_search_to_file


def _spec_args(parser):
    parser.add_argument("--p", type=int, default=3, help="prime modulus (default 3)")
    parser.add_argument("--d", type=int, default=4, help="dimension (default 4)")


def _out(args, text):
    if args.output and args.output != "-":
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_search(args) -> int:
    spec = FieldSpec(args.p, args.d)
    from .gf import primitive_polys

    n_polys = len(primitive_polys(spec))
    if args.poly == "all":
        indices = list(range(1, n_polys + 1))
    else:
        index = int(args.poly)
        if not 1 <= index <= n_polys:
            print(f"error: polynomial index must be in [1, {n_polys}]", file=sys.stderr)
            return 1
        indices = [index]
    counts = run_search_to_file(
        spec, indices, args.output, shards=args.shards, resume=args.resume, log=print
    )
    print(f"total: {sum(counts.values())} tuples -> {args.output}")
    return 0


def _load_sets(path: str, spec: FieldSpec):
    return [
        StandardSet.from_codes(spec, codes, validate=False)
        for codes in read_code_tuples(path, spec)
    ]


def cmd_classify(args) -> int:
    header = read_header(args.input) if args.input else None
    if header:
        spec = FieldSpec(header["p"], header["d"])
    else:
        spec = FieldSpec(args.p, args.d)
    try:
        sets = _load_sets(args.input, spec)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    census = Census(spec)
    try:
        if args.mode == "isomorphism":
            records = census.isomorphism_classes(sets)
            n_comm = sum(1 for r in records if r.commutative)
            write_iso_class_file(args.output, spec, records)
            print(f"{len(records)} ({n_comm} commutative)")
            return 0
        reps = [census.decode(k) for k in sorted({census.key_of(s) for s in sets})]
        if args.mode == "isotopy":
            records = census.isotopy_classes(reps)
        else:
            records = census.s3_classes(reps)
    except (ValueError, RuntimeError, NotRightPrimitive) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    labels = {}
    if spec == SPEC_81 and args.mode == "s3":
        for fx in PLANES:
            idx = census.s3_class_index(records, fx.standard_set())
            if idx >= 0:
                labels[idx + 1] = fx.label
    n_comm = sum(1 for r in records if r.contains_commutative)
    write_plane_class_file(args.output, spec, args.mode, records, labels)
    print(f"{len(records)} ({n_comm} commutative)")
    return 0


def cmd_report(args) -> int:
    if args.format == "table2":
        if len(args.inputs) != 3:
            print("error: table2 needs the isomorphism, isotopy and s3 class files",
                  file=sys.stderr)
            return 1
        headers = [read_header(path) for path in args.inputs]
        if any(h is None for h in headers):
            print("error: inputs are not classification outputs", file=sys.stderr)
            return 1
        by_mode = {h["mode"]: (h["classes"], h["commutative"]) for h in headers}
        missing = {"isomorphism", "isotopy", "s3"} - set(by_mode)
        if missing:
            print(f"error: missing classification modes: {sorted(missing)}", file=sys.stderr)
            return 1
        _out(args, render_table2(by_mode["isomorphism"], by_mode["isotopy"], by_mode["s3"]))
        return 0

    path = args.inputs[0]
    header = read_header(path)
    if header is None:
        print("error: input is not a classification output", file=sys.stderr)
        return 1
    spec = FieldSpec(header["p"], header["d"])

    if args.format == "lines":
        lines = []
        for codes in read_code_tuples(path, spec):
            lines.append(", ".join(str(c) for c in codes))
        _out(args, "\n".join(lines) + "\n")
        return 0

    if header["mode"] != "s3":
        print("error: table1 needs the s3 classification output", file=sys.stderr)
        return 1
    if spec != SPEC_81:
        print("error: table1 is defined for the order-81 census", file=sys.stderr)
        return 1
    census = Census(spec)
    reps = _load_sets(path, spec)
    records = census.s3_classes(reps)
    try:
        rows = build_table1(census, records)
        report = CensusReport(
            table1=tuple(rows),
            iso_counts=None,
            isotopy_counts=None,
            s3_counts=(header["classes"], header["commutative"]),
        )
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _out(args, render_table1(report.table1))
    return 0


def cmd_inspect(args) -> int:
    spec = FieldSpec(args.p, args.d)
    try:
        D = StandardSet.from_codes(spec, args.codes)
    except InvalidTuple as exc:
        print(f"invalid tuple: {exc}", file=sys.stderr)
        return 1
    flags = predicates(D)
    print(f"codes: {D.codes}")
    for i, m in enumerate(D.matrices, 1):
        poly = char_poly(m)
        print(f"A_{i} (char poly {poly}):")
        for row in m.entries:
            print("   ", " ".join(str(x) for x in row))
    parts = [
        "commutative" if flags.commutative else "not commutative",
        "associative" if flags.associative else "not associative",
    ]
    try:
        from .classify import aut_order as _aut

        parts.append(f"|Aut| = {_aut(D)}")
        print(", ".join(parts))
        print(f"canonical key: {canonical_key(D).codes}")
    except NotRightPrimitive:
        print(", ".join(parts))
        print("not right primitive: no canonical key")
        return 0
    if args.full:
        from collections import Counter

        census = Census(spec)
        records, sa = isotope_inventory(D, census)
        inv = inventory_string(sorted(Counter(r.aut_order for r in records).items()))
        orbit, sflags = s3_orbit_structure(D, census)
        print(f"|At| = {at_order(D, census)}, S/A sum = {sa} = {inv}")
        print(f"S3 orbit size {orbit}, flags "
              + " ".join(f"{k}:{'y' if v else 'n'}" for k, v in sflags.items()))
    return 0


def cmd_bench(args) -> int:
    from .bench import run_benchmarks

    return run_benchmarks(full=args.full)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="semifields",
        description="Exhaustive search and classification of finite semifields",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_search = sub.add_parser("search", help="enumerate all standard sets")
    _spec_args(p_search)
    p_search.add_argument("--poly", default="all", help="polynomial index or 'all'")
    p_search.add_argument("--shards", type=int, default=1, help="worker processes")
    p_search.add_argument("--resume", action="store_true",
                          help="reuse checkpointed shard files")
    p_search.add_argument("--output", required=True, help="tuple stream path")
    p_search.set_defaults(func=cmd_search)

    p_classify = sub.add_parser("classify", help="classify a tuple stream")
    _spec_args(p_classify)
    p_classify.add_argument("--mode", choices=("isomorphism", "isotopy", "s3"),
                            required=True)
    p_classify.add_argument("--input", required=True)
    p_classify.add_argument("--output", required=True)
    p_classify.set_defaults(func=cmd_classify)

    p_report = sub.add_parser("report", help="render census tables")
    p_report.add_argument("--format", choices=("table1", "table2", "lines"),
                          required=True)
    p_report.add_argument("--output", default="-", help="output path or '-'")
    p_report.add_argument("inputs", nargs="+", help="classification output file(s)")
    p_report.set_defaults(func=cmd_report)

    p_inspect = sub.add_parser("inspect", help="describe one coordinate tuple")
    _spec_args(p_inspect)
    p_inspect.add_argument("codes", nargs="+", type=int,
                           help="matrix codes (a2.. or a1..)")
    p_inspect.add_argument("--full", action="store_true",
                           help="also compute autotopy and orbit data")
    p_inspect.set_defaults(func=cmd_inspect)

    p_bench = sub.add_parser("bench", help="compare kernel backends")
    p_bench.add_argument("--full", action="store_true",
                         help="benchmark a full-size workload")
    p_bench.set_defaults(func=cmd_bench)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
