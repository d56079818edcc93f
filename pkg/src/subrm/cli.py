"""Command line front end: code parameters, weight analysis, minimum
weight enumeration, the small-scale removal search, and Monte-Carlo
simulation with CSV output."""

from __future__ import annotations

import argparse
import math
import sys

from . import simulator, weights
from .codebook import CodeSpec, build_code
from .decoder import BpConfig, LgsConfig, build_graph
from .weights import ENUM_MAX_N


def _add_code_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--m", type=int, required=True, help="number of blocks (>= 2)")
    sub.add_argument(
        "--mprime", type=int, required=True, help="variables per block (>= 2)"
    )


def _check_code_args(parser: argparse.ArgumentParser, args) -> None:
    if args.m < 2 or args.mprime < 2:
        parser.error("need --m >= 2 and --mprime >= 2")


def _parse_grid(parser: argparse.ArgumentParser, text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        parser.error("--ebno must be start:step:stop")
    try:
        start, step, stop = (float(p) for p in parts)
    except ValueError:
        parser.error("--ebno values must be numeric")
    if step <= 0 or stop < start:
        parser.error("--ebno needs step > 0 and stop >= start")
    grid = []
    x = start
    while x <= stop + 1e-9:
        grid.append(round(x, 10))
        x += step
    return grid


def _auto_path_len(n: int) -> int:
    if n <= 256:
        return 512
    if n <= 512:
        return 2048
    return 8192


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subrm",
        description="recursive subproduct subcodes of second-order RM codes",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_info = subs.add_parser("info", help="print code parameters")
    _add_code_args(p_info)

    p_wdist = subs.add_parser("wdist", help="print the exact weight distribution")
    _add_code_args(p_wdist)

    p_minwt = subs.add_parser("minwt", help="count or dump minimum-weight words")
    _add_code_args(p_minwt)
    p_minwt.add_argument(
        "--dump", metavar="PATH", help="write one hex codeword per line to PATH"
    )

    p_opt = subs.add_parser(
        "optsearch", help="search all degree-2 row removals for the best subcode"
    )
    p_opt.add_argument("--m", type=int, default=2)
    p_opt.add_argument("--mprime", type=int, default=2)

    p_sim = subs.add_parser("simulate", help="Monte-Carlo CER over an Eb/N0 grid")
    _add_code_args(p_sim)
    p_sim.add_argument(
        "--ebno", required=True, metavar="START:STEP:STOP", help="Eb/N0 grid in dB"
    )
    p_sim.add_argument("--trials", type=int, default=1000, help="trials per point")
    p_sim.add_argument("--seed", type=int, default=1, help="base RNG seed")
    p_sim.add_argument(
        "--decoder",
        choices=["bp", "bp+lgs"],
        default="bp+lgs",
        help="BP pipeline alone or followed by local graph search",
    )
    p_sim.add_argument(
        "--plgs",
        type=int,
        default=None,
        help="search path length (default by code length: 512/2048/8192)",
    )
    p_sim.add_argument(
        "--lgs-mode",
        choices=["auto", "exhaustive", "greedy"],
        default="auto",
        help="neighbor generation; auto picks exhaustive up to n=512",
    )
    p_sim.add_argument(
        "--max-iters", type=int, default=100, help="BP iteration cap (default 100)"
    )
    p_sim.add_argument(
        "--w-proj",
        type=float,
        default=0.006,
        help="projection extrinsic damping weight (default 0.006)",
    )
    p_sim.add_argument(
        "--w-prod",
        type=float,
        default=0.2,
        help="product extrinsic damping weight (default 0.2)",
    )
    p_sim.add_argument("--out", metavar="PATH", help="write CSV here (default stdout)")
    p_sim.add_argument("--workers", type=int, default=1, help="parallel workers")
    p_sim.add_argument(
        "--min-errors",
        type=int,
        default=0,
        help="stop a point early after this many errors (0 = run all trials)",
    )
    p_sim.add_argument(
        "--progress-every",
        type=int,
        default=0,
        help="print a progress line every N trials (0 = quiet)",
    )
    return parser


def _cmd_info(args) -> None:
    spec = CodeSpec(args.m, args.mprime)
    code = build_code(spec)
    v = spec.v
    rm_k = 1 + v + math.comb(v, 2)
    print(
        f"code (m={args.m}, m'={args.mprime}): n={code.n} k={code.k} "
        f"dmin={code.dmin} min-weight words {weights.count_min_weight(args.m, args.mprime)}"
    )
    print(
        f"RM(2,{v}): n={code.n} k={rm_k} dmin={code.dmin} "
        f"min-weight words {weights.count_min_weight_rm2(v)}"
    )
    gap = simulator.rate_gap_db(rm_k, code.k)
    print(f"rate gap: {gap:.4f} dB (k {rm_k} vs {code.k})")


def _cmd_wdist(parser, args) -> None:
    if args.mprime not in (2, 3):
        parser.error("wdist supports --mprime 2 or 3 only")
    dist = weights.weight_distribution(args.m, args.mprime)
    for w, c in dist.entries.items():
        print(f"{w}\t{c}")


def _cmd_minwt(parser, args) -> None:
    spec = CodeSpec(args.m, args.mprime)
    if spec.n > ENUM_MAX_N:
        parser.error(f"minwt enumeration supports n <= {ENUM_MAX_N}")
    code = build_code(spec)
    words = sorted(w.bits for w in weights.enumerate_min_weight(code))
    print(len(words))
    if args.dump:
        digits = code.n // 4
        try:
            with open(args.dump, "w", encoding="ascii") as fh:
                for w in words:
                    fh.write(f"{w:0{digits}x}\n")
        except OSError as exc:
            raise OSError(f"cannot write dump to {args.dump}: {exc}") from exc


def _cmd_optsearch(parser, args) -> None:
    if args.m < 2 or args.mprime < 2:
        parser.error("need --m >= 2 and --mprime >= 2")
    report = weights.optimality_search(args.m, args.mprime)
    for cand in report.candidates:
        label = " ".join(f"x{p}x{q}" for p, q in cand.removed)
        print(f"removed {label}: dmin={cand.dmin} count={cand.min_weight_count}")
    print(
        f"minimum count {report.min_count} attained by "
        f"{len(report.minimizers)} removal set(s)"
    )
    label = " ".join(f"x{p}x{q}" for p, q in report.block_pattern)
    print(f"same-block pattern {label} attains the minimum")


def _cmd_simulate(parser, args) -> None:
    grid = _parse_grid(parser, args.ebno)
    if args.trials < 1:
        parser.error("--trials must be >= 1")
    spec = CodeSpec(args.m, args.mprime)
    code = build_code(spec)
    graph = build_graph(code)
    bp_cfg = BpConfig(
        max_iters=args.max_iters, w_proj=args.w_proj, w_prod=args.w_prod
    )
    if args.decoder == "bp":
        lgs_cfg = None
    else:
        path_len = args.plgs if args.plgs is not None else _auto_path_len(code.n)
        if args.lgs_mode == "auto":
            mode = "exhaustive" if code.n <= ENUM_MAX_N else "greedy"
        else:
            mode = args.lgs_mode
        lgs_cfg = LgsConfig(path_len=path_len, neighbor_mode=mode)
    points = simulator.sweep(
        code,
        graph,
        grid,
        bp_cfg,
        lgs_cfg,
        trials=args.trials,
        seed=args.seed,
        out_path=args.out,
        workers=args.workers,
        progress_every=args.progress_every,
        min_errors=args.min_errors,
    )
    if args.out is None:
        print(simulator.CSV_HEADER)
        for p in points:
            print(simulator.format_point(p))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "info":
        _check_code_args(parser, args)
        _cmd_info(args)
    elif args.command == "wdist":
        _check_code_args(parser, args)
        _cmd_wdist(parser, args)
    elif args.command == "minwt":
        _check_code_args(parser, args)
        _cmd_minwt(parser, args)
    elif args.command == "optsearch":
        _cmd_optsearch(parser, args)
    elif args.command == "simulate":
        _check_code_args(parser, args)
        _cmd_simulate(parser, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
