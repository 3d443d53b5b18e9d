"""Command-line front end.

Records go to stdout as JSONL unless ``--store`` names an append-only file.
Exit status: 0 when no record fails, 1 when any does, 2 for usage errors and
3 for I/O errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import __version__
from .aplus import q_range
from .muirhead import Scenario
from .records import append_records, sort_records
from .runners import (
    SweepConfig,
    certify_item,
    lemma21_item,
    lemma41_item,
    lemma42_item,
    lemma42_items,
    lemma43_item,
    lemma43_items,
    oracle_item,
    run_batch,
    scan_records,
    scenario_items,
    sweep_item,
    theorem31_item,
    theorem31_items,
    worker_count,
)
from .simplex import DEFAULT_OMEGA_MAX, DEFAULT_POINTS, FIGURE1

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _common(p: argparse.ArgumentParser, c_max: int | None = None, samples: int | None = None) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--store", metavar="PATH", help="append JSONL records here instead of printing them")
    p.add_argument("--timing", action="store_true", help="fill elapsed_ms (makes output non-reproducible)")
    p.add_argument("--workers", type=int, default=None, help="process count (default: CPUs, capped by CUSUMLAB_THREADS)")
    if c_max is not None:
        p.add_argument("--c-max", type=int, default=c_max)
    if samples is not None:
        p.add_argument("--w-samples", "--samples", dest="w_samples", type=int, default=samples,
                       help="odds draws per scenario")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cusumlab", description="Exact verification of positive cusum properties.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="lemma and theorem checks")
    vsub = verify.add_subparsers(dest="target", required=True)
    p = vsub.add_parser("lemma21", help="positivity of contributing cusums at a+ (summary per scenario)")
    _common(p, 6, 5)
    p.add_argument("--mode", choices=("exact", "float"), default="exact")
    p = vsub.add_parser("lemma41", help="average of k_J against the threshold, and the sampling model")
    _common(p, 6)
    p = vsub.add_parser("lemma42", help="single-index sign pattern")
    _common(p, 6, 200)
    p = vsub.add_parser("lemma43", help="single-index ratio bounds and the included/excluded identity")
    _common(p, 6, 200)
    p = vsub.add_parser("theorem31", help="sampled configurations and stage-one paths")
    _common(p, 5, 100)

    p = sub.add_parser("oracle", help="a+ engine against direct permutation enumeration")
    _common(p, 5, 5)
    p = sub.add_parser("sweep", help="every contributing cusum at a+, one record per subscript")
    _common(p, 6, 5)
    p.add_argument("--mode", choices=("exact", "float"), default="exact")

    p = sub.add_parser("figure1", help="write the boundary-curve CSV for c=48, b=g=25, k=22")
    _common(p)
    p.add_argument("--out", required=True, metavar="PATH")
    p.add_argument("--h2", type=int, default=FIGURE1["h2"])
    p.add_argument("--omega-max", type=float, default=DEFAULT_OMEGA_MAX)
    p.add_argument("--points", type=int, default=DEFAULT_POINTS)

    p = sub.add_parser("scan-A", help="boundary-curve scan for any (c, b, k, h2)")
    _common(p)
    for name in ("--c", "--b", "--k", "--h2"):
        p.add_argument(name, type=int, required=True)
    p.add_argument("--omega-max", type=float, default=DEFAULT_OMEGA_MAX)
    p.add_argument("--points", type=int, default=DEFAULT_POINTS)
    p.add_argument("--out", metavar="PATH", help="optional CSV output")

    p = sub.add_parser("certify", help="positivity certificate for one cusum at a+")
    _common(p, None, 20)
    for name in ("--c", "--b", "--k", "--p", "--q"):
        p.add_argument(name, type=int, required=True)
    p.add_argument("--h", type=_int_list, required=True, help="cusum subscript, e.g. 1,3")
    return parser


def _config(args, c_max_required: bool = True) -> SweepConfig:
    workers = args.workers if args.workers is not None else worker_count()
    if workers < 1:
        raise UsageError("--workers must be >= 1")
    try:
        return SweepConfig(
            c_max=getattr(args, "c_max", 3) if c_max_required else 3,
            w_samples=getattr(args, "w_samples", 1),
            seed=args.seed,
            mode=getattr(args, "mode", "exact"),
            timing=args.timing,
            workers=workers,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _certify_scenario(args) -> tuple[Scenario, tuple]:
    c, b, k, p, q, h = args.c, args.b, args.k, args.p, args.q, args.h
    if not 1 <= b <= c - 1 or not 1 <= k <= c - b - 1 or not 1 <= p <= c - k:
        raise UsageError(f"no scenario with c={c}, b={b}, k={k}, p={p}")
    lo, hi = q_range(c, b, k, p)
    if not lo <= q <= hi:
        raise UsageError(f"q must lie in [{lo}, {hi}]")
    if len(h) != p or any(not 1 <= x <= c for x in h):
        raise UsageError(f"--h needs {p} entries in 1..{c}")
    return Scenario.representative(c, b, k, p, q), h


def collect(args) -> list:
    """Run the selected command and return its records (already sorted)."""
    cmd = args.command
    if cmd == "verify":
        cfg = _config(args)
        if args.target == "lemma21":
            return run_batch(lemma21_item, scenario_items(cfg.c_max), cfg)
        if args.target == "lemma41":
            return run_batch(lemma41_item, list(range(3, cfg.c_max + 1)), cfg)
        if args.target == "lemma42":
            return run_batch(lemma42_item, lemma42_items(cfg.c_max), cfg)
        if args.target == "lemma43":
            return run_batch(lemma43_item, lemma43_items(cfg.c_max), cfg)
        if args.target == "theorem31":
            if cfg.c_max > 6:
                raise UsageError("theorem31 enumerates permutations; --c-max must be <= 6")
            return run_batch(theorem31_item, theorem31_items(cfg.c_max), cfg)
    if cmd == "oracle":
        cfg = _config(args)
        if cfg.c_max > 6:
            raise UsageError("oracle enumerates permutations; --c-max must be <= 6")
        return run_batch(oracle_item, scenario_items(cfg.c_max), cfg)
    if cmd == "sweep":
        cfg = _config(args)
        return run_batch(sweep_item, scenario_items(cfg.c_max), cfg)
    if cmd == "figure1":
        return _curve(FIGURE1["c"], FIGURE1["b"], FIGURE1["k"], args, "figure1")
    if cmd == "scan-A":
        return _curve(args.c, args.b, args.k, args, "scan-A")
    if cmd == "certify":
        cfg = _config(args, c_max_required=False)
        scn, h = _certify_scenario(args)
        return certify_item(scn, cfg, [h])
    raise UsageError(f"unknown command {cmd!r}")


def _curve(c, b, k, args, command):
    if not 1 <= b <= c - 2 or not 1 <= k <= c - b - 1 or not 2 <= args.h2 <= c - 1:
        raise UsageError("need 1 <= b <= c-2, 1 <= k <= c-b-1 and 2 <= h2 <= c-1")
    if args.points < 2 or args.omega_max <= 1:
        raise UsageError("need --points >= 2 and --omega-max > 1")
    return scan_records(c, b, k, args.h2, args.omega_max, args.points, getattr(args, "out", None), command)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        records = sort_records(collect(args))
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"cusumlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"cusumlab: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        if args.store:
            append_records(records, args.store)
        else:
            sys.stdout.writelines(r.to_json() + "\n" for r in records)
            sys.stdout.flush()
    except OSError as exc:
        print(f"cusumlab: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    failed = sum(1 for r in records if r.verdict == "fail")
    print(f"{len(records)} records, {failed} failed", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
