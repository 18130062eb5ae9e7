"""Command-line interface.

    greencell validate FILE
    greencell run FILE --scheme ID [--out PATH]
    greencell compare FILE [--precision N] [--csv PATH] [--jsonl PATH]
    greencell gen --bs N --mts a,b,... --seed S [--out PATH]

Exit status: 0 on success, 1 on parse/validation failure, 2 when the
scenario is infeasible or unsupported for the scheme.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import (InfeasibleError, ScenarioParseError, ScenarioValidationError,
                     UnsupportedScenarioError)
from .model import validate_scenario
from .scenario_io import emit_scenario, generate_scenario, parse_scenario
from .schemes import SCHEMES, compare_all, run_scheme

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE = 0, 1, 2


def _load(path):
    s = parse_scenario(path, validate=False)
    report = validate_scenario(s)
    if not report.ok:
        raise ScenarioValidationError(report)
    return s


def cmd_validate(args) -> int:
    s = parse_scenario(args.file, validate=False)
    report = validate_scenario(s)
    if report.ok:
        print(f"{args.file}: ok ({s.n_bs} BSs, {s.n_mt} terminals)")
        return EXIT_OK
    for p in report.problems:
        print(f"{args.file}: {p}", file=sys.stderr)
    return EXIT_INVALID


def cmd_run(args) -> int:
    s = _load(args.file)
    res = run_scheme(s, args.scheme, fixed_price=args.fixed_price)
    p = args.precision
    print(f"scheme:      {res.scheme}")
    print("supply:      " + ", ".join(f"{x:.{p}f}" for x in res.supply))
    print("consumption: " + ", ".join(f"{x:.{p}f}" for x in res.profile.per_bs_power))
    print(f"total cost:  {res.total:.{p}f}")
    for note in res.notes:
        print(f"note: {note}")
    if args.out:
        Path(args.out).write_text(json.dumps(res.to_record()) + "\n")
    return EXIT_OK


def cmd_compare(args) -> int:
    s = _load(args.file)
    report = compare_all(s, trading_comp=args.trading_comp)
    print(report.format_table(args.precision))
    if args.csv:
        Path(args.csv).write_text(report.to_csv())
    if args.jsonl:
        Path(args.jsonl).write_text(report.to_jsonl())
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        mts = [int(x) for x in args.mts.split(",") if x.strip()]
    except ValueError:
        print(f"--mts: expected comma-separated integers, got {args.mts!r}", file=sys.stderr)
        return EXIT_INVALID
    try:
        doc = generate_scenario(args.bs, mts, args.seed)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INVALID
    text = emit_scenario(doc)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="greencell",
                                     description="Energy-cost minimization with energy and "
                                                 "communication cooperation among BSs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a scenario file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="run one scheme")
    p.add_argument("file")
    p.add_argument("--scheme", required=True, choices=SCHEMES)
    p.add_argument("--out", help="write the JSON record here")
    p.add_argument("--precision", type=int, default=2)
    p.add_argument("--fixed-price", action="store_true",
                   help="joint-trading-comp: report the fixed-price operating point")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="run all table schemes")
    p.add_argument("file")
    p.add_argument("--precision", type=int, default=2)
    p.add_argument("--csv", help="write the comparison table as CSV")
    p.add_argument("--jsonl", help="write one JSON record per scheme")
    p.add_argument("--trading-comp", choices=("fixed-price", "optimal"), default="fixed-price")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gen", help="generate a seeded Rayleigh scenario")
    p.add_argument("--bs", type=int, required=True)
    p.add_argument("--mts", required=True, help="terminals per BS, e.g. 5,15")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ScenarioValidationError as exc:
        for p in exc.report.problems:
            print(f"invalid: {p}", file=sys.stderr)
        return EXIT_INVALID
    except (InfeasibleError, UnsupportedScenarioError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
