"""Command-line entry point: construct, verify, simulate, compare, tables, oa.

Exit codes: 0 success, 1 verification or simulation failure, 2 parameter
error, 3 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import comparator
from .coded import strip_useless
from .constructions import (
    construct_flexible_pda,
    construct_hypergraph_pda,
    construct_partition_pda,
    construct_theorem1,
    transform_theorem2,
)
from .oa import ParameterError, build_poa, is_proper, verify_oa, write_oa
from .pda import PdaArray, PdaFormatError, canonicalize, pda_from_json, pda_to_json, read_pda, write_pda
from .simulator import run_end_to_end
from .verifier import find_useless_stars, scheme_metrics, verify_pda

EXIT_OK, EXIT_FAIL, EXIT_PARAM, EXIT_IO = 0, 1, 2, 3

CONSTRUCTIONS = {
    "partition": lambda a: construct_partition_pda(a.q, a.m),
    "hypergraph": lambda a: construct_hypergraph_pda(a.q, a.m, a.t),
    "flexible": lambda a: construct_flexible_pda(a.q, a.z, a.m, a.t),
    "theorem1": lambda a: construct_theorem1(a.q, a.z, a.m, a.t),
    "theorem2": lambda a: transform_theorem2(a.q, a.z, a.m, a.t),
}
SIM_SCHEMES = list(CONSTRUCTIONS) + ["theorem3", "theorem4"]


class UsageError(Exception):
    pass


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _load_pda(path: str) -> PdaArray:
    text = Path(path).read_text()
    if path.endswith(".json"):
        try:
            return pda_from_json(text)
        except (KeyError, json.JSONDecodeError) as exc:
            raise PdaFormatError(f"bad PDA JSON: {exc}") from exc
    return read_pda(text)


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError as exc:
        raise ParameterError(f"expected a list of integers, got {text!r}") from exc


def _scheme_params(args) -> dict:
    if args.scheme == "partition":
        return {"q": args.q, "m": args.m}
    if args.scheme == "hypergraph":
        return {"q": args.q, "m": args.m, "t": args.t}
    return {"q": args.q, "z": args.z, "m": args.m, "t": args.t}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_construct(args) -> int:
    pda = canonicalize(CONSTRUCTIONS[args.scheme](args))
    params = scheme_metrics(pda)
    label = f"{args.scheme} q={args.q} z={args.z} m={args.m} t={args.t}"
    doc = pda_to_json(pda)
    doc["scheme"] = args.scheme
    doc["scheme_params"] = params.as_dict()
    if args.out:
        Path(args.out).write_text(write_pda(pda, comments=[label]))
        Path(args.out + ".json").write_text(_dump(doc))
    else:
        sys.stdout.write(_dump(doc) if args.json else write_pda(pda, comments=[label]))
    return EXIT_OK


def cmd_verify(args) -> int:
    pda = _load_pda(args.path)
    report = verify_pda(pda)
    doc = report.as_dict()
    if args.useless:
        doc["useless"] = find_useless_stars(pda).as_dict()
    _emit(args, _dump(doc))
    if not report.passed:
        print(f"verification failed: {report.c3_reason or 'C1/C2 violated'}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_simulate(args) -> int:
    demand = _ints(args.demand) if args.demand else None
    if args.file:
        pda = canonicalize(_load_pda(args.file))
        scheme = strip_useless(pda) if args.coded else pda
        report = run_end_to_end(scheme, args.N, args.file_size, demand, args.seed, {"file": args.file})
    else:
        if not args.scheme:
            raise UsageError("give a scheme name or --file")
        report = run_end_to_end(args.scheme, args.N, args.file_size, demand, args.seed, _scheme_params(args))
    _emit(args, _dump(report.as_dict()))
    print(f"expected rate {report.expected_rate}, measured rate {report.measured_rate}", file=sys.stderr)
    return EXIT_OK if report.all_succeeded and report.peel_misses == 0 else EXIT_FAIL


def cmd_compare(args) -> int:
    if args.preset == "custom":
        if not args.schemes or not args.qs:
            raise UsageError("custom sweep needs --schemes and --qs")
        rows = comparator.custom_rows(
            args.schemes.split(","),
            _ints(args.qs),
            _ints(args.zs) if args.zs else None,
            _ints(args.ms),
            _ints(args.ts),
        )
    else:
        rows = comparator.PRESETS[args.preset]()
    _emit(args, comparator.to_csv(rows))
    return EXIT_OK


def cmd_tables(args) -> int:
    points = []
    for chunk in args.points.split(";"):
        p = _ints(chunk)
        if len(p) != 4:
            raise ParameterError(f"each point needs q,z,m,t; got {chunk!r}")
        points.append(tuple(p))
    _emit(args, comparator.to_csv(comparator.table2_rows(points)))
    return EXIT_OK


def cmd_oa(args) -> int:
    arr = build_poa(args.m, args.q, args.sum)
    report = verify_oa(arr, args.m - 1)
    if args.json:
        _emit(args, _dump({"rows": arr.rows.tolist(), "passed": report.passed, "index": report.index, "row_sum": is_proper(arr)}))
    else:
        _emit(args, write_oa(arr))
    return EXIT_OK if report.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _globals(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--out", default=d, help="write output here instead of stdout")
    parser.add_argument("--json", action="store_true", default=argparse.SUPPRESS if suppress else False, help="JSON output where supported")
    parser.add_argument("--seed", type=int, default=d if suppress else 0, help="RNG seed for simulations")


def _qzmt(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q", type=int, default=5)
    p.add_argument("--z", type=int, default=1)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--t", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pdacache", description=__doc__.splitlines()[0])
    _globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a PDA and write it as text plus a JSON sidecar")
    p.add_argument("scheme", choices=sorted(CONSTRUCTIONS))
    _qzmt(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check C1-C3 of a PDA file")
    p.add_argument("path")
    p.add_argument("--useless", action="store_true", help="append the useless-star report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="place, deliver and decode over a synthetic library")
    p.add_argument("scheme", nargs="?", choices=SIM_SCHEMES)
    p.add_argument("--file", help="PDA file instead of a named scheme")
    p.add_argument("--coded", action="store_true", help="with --file: strip useless stars and use MDS placement")
    _qzmt(p)
    p.add_argument("--N", type=int, default=None, help="number of files (default K)")
    p.add_argument("--file-size", type=int, default=None, help="bytes per file")
    p.add_argument("--demand", help="comma-separated file index per user")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="CSV comparison of closed forms")
    p.add_argument("preset", choices=sorted(comparator.PRESETS) + ["custom"])
    p.add_argument("--schemes", help="custom: comma-separated scheme names")
    p.add_argument("--qs", help="custom: q values")
    p.add_argument("--zs", help="custom: z values (default 1..q-1)")
    p.add_argument("--ms", default="3", help="custom: m values")
    p.add_argument("--ts", default="2", help="custom: t values")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("tables", help="CSV of the four new schemes at given points")
    p.add_argument("--points", default="5,3,2,1;5,2,2,1", help="semicolon-separated q,z,m,t tuples")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("oa", help="print a proper orthogonal array of strength m-1")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--sum", type=int, default=0)
    p.set_defaults(func=cmd_oa)

    for sp in sub.choices.values():
        _globals(sp, suppress=True)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, UsageError, ValueError) as exc:
        if isinstance(exc, PdaFormatError):
            print(f"parse error: {exc}", file=sys.stderr)
            return EXIT_IO
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
