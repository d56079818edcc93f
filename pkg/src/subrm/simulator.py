"""AWGN Monte-Carlo codeword error rate evaluation.

Each trial draws an independent message and noise realization from
counter-based streams keyed by (seed, trial), so results do not depend
on how trials are split across workers.  Alongside the raw codeword
error rate, each point reports the maximum-likelihood lower bound: the
fraction of trials where the decoder output scored at least as well as
the transmitted word, which no decoder could have gotten right.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .codebook import CodeInstance, CodeSpec, build_code, encode
from .decoder import BpConfig, LgsConfig, TannerGraph, build_graph, decode_pipeline, ml_metric
from .gf2 import BitVector

CSV_HEADER = "ebno_db,trials,errors,cer,ml_lb_errors,ml_lb"


@dataclass(frozen=True)
class ChannelConfig:
    ebno_db: float
    rate: float
    seed: int
    trials: int

    def __post_init__(self) -> None:
        if not 0 < self.rate < 1:
            raise ValueError("rate must lie in (0, 1)")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")


@dataclass(frozen=True)
class CerPoint:
    ebno_db: float
    trials: int
    errors: int
    cer: float
    ml_lb_errors: int
    ml_lb: float

    def __post_init__(self) -> None:
        if not 0 <= self.ml_lb_errors <= self.errors <= self.trials:
            raise ValueError("inconsistent error counts")


def noise_sigma(cfg: ChannelConfig) -> float:
    """Noise standard deviation for BPSK at the configured Eb/N0."""
    return math.sqrt(1.0 / (2.0 * cfg.rate * 10.0 ** (cfg.ebno_db / 10.0)))


def _lane_rng(seed: int, trial: int, lane: int) -> np.random.Generator:
    # one Philox stream per (seed, trial, lane); lane 0 noise, lane 1 message
    key = np.array([seed, trial], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=[0, 0, 0, lane]))


def awgn_llrs(codeword: BitVector, cfg: ChannelConfig, trial: int) -> np.ndarray:
    """Channel LLRs 2y/sigma^2 for one BPSK transmission of the codeword."""
    x = 1.0 - 2.0 * codeword.to_array().astype(np.float64)
    sigma = noise_sigma(cfg)
    noise = _lane_rng(cfg.seed, trial, 0).standard_normal(len(x))
    y = x + sigma * noise
    return 2.0 * y / (sigma * sigma)


def random_message(k: int, cfg: ChannelConfig, trial: int) -> np.ndarray:
    return _lane_rng(cfg.seed, trial, 1).integers(0, 2, size=k, dtype=np.uint8)


def _run_trials(
    code: CodeInstance,
    graph: TannerGraph,
    bp_cfg: BpConfig,
    lgs_cfg: LgsConfig | None,
    ch_cfg: ChannelConfig,
    lo: int,
    hi: int,
    message_mode: str,
    check_membership: bool,
) -> tuple[int, int]:
    errors = 0
    ml_errors = 0
    zero = BitVector(0, code.n)
    for trial in range(lo, hi):
        if message_mode == "zero":
            sent = zero
        else:
            msg = random_message(code.k, ch_cfg, trial)
            sent = encode(code, msg)
        llr = awgn_llrs(sent, ch_cfg, trial)
        out = decode_pipeline(code, graph, llr, bp_cfg, lgs_cfg).codeword
        if check_membership and code.reduce(out.bits) != 0:
            raise AssertionError("decoder output is not a codeword")
        if out != sent:
            errors += 1
            if ml_metric(llr, out) >= ml_metric(llr, sent):
                ml_errors += 1
    return errors, ml_errors


_POOL_CTX: dict = {}


def _pool_init(spec: CodeSpec, bp_cfg: BpConfig, lgs_cfg: LgsConfig | None) -> None:
    code = build_code(spec)
    _POOL_CTX["args"] = (code, build_graph(code), bp_cfg, lgs_cfg)


def _pool_task(job) -> tuple[int, int, int]:
    ch_cfg, lo, hi, message_mode, check_membership = job
    code, graph, bp_cfg, lgs_cfg = _POOL_CTX["args"]
    errors, ml = _run_trials(
        code, graph, bp_cfg, lgs_cfg, ch_cfg, lo, hi, message_mode, check_membership
    )
    return errors, ml, hi - lo


def run_point(
    code: CodeInstance,
    graph: TannerGraph,
    bp_cfg: BpConfig,
    lgs_cfg: LgsConfig | None,
    ch_cfg: ChannelConfig,
    *,
    workers: int = 1,
    message_mode: str = "random",
    check_membership: bool = False,
    progress_every: int = 0,
    min_errors: int = 0,
) -> CerPoint:
    """Monte-Carlo CER at one Eb/N0 point.

    The trial split across workers does not affect the counts; with
    min_errors > 0 the point may stop early once that many errors have
    accumulated (exploratory use; the stopping trial then depends on
    the chunking).
    """
    if message_mode not in ("random", "zero"):
        raise ValueError("message_mode must be 'random' or 'zero'")
    total = ch_cfg.trials
    errors = 0
    ml_errors = 0
    done = 0
    if workers <= 1:
        step = progress_every if progress_every > 0 else total
        step = min(step, total)
        while done < total:
            hi = min(done + step, total)
            e, ml = _run_trials(
                code, graph, bp_cfg, lgs_cfg, ch_cfg, done, hi,
                message_mode, check_membership,
            )
            errors += e
            ml_errors += ml
            done = hi
            if progress_every > 0:
                print(
                    f"point {ch_cfg.ebno_db:g} trial {done}/{total} errors {errors}",
                    flush=True,
                )
            if min_errors > 0 and errors >= min_errors:
                break
    else:
        chunk = max(1, math.ceil(total / (workers * 8)))
        jobs = [
            (ch_cfg, lo, min(lo + chunk, total), message_mode, check_membership)
            for lo in range(0, total, chunk)
        ]
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=_pool_init,
            initargs=(code.spec, bp_cfg, lgs_cfg),
        ) as pool:
            for e, ml, cnt in pool.map(_pool_task, jobs):
                errors += e
                ml_errors += ml
                done += cnt
                if progress_every > 0:
                    print(
                        f"point {ch_cfg.ebno_db:g} trial {done}/{total} "
                        f"errors {errors}",
                        flush=True,
                    )
                if min_errors > 0 and errors >= min_errors:
                    break
    return CerPoint(
        ebno_db=ch_cfg.ebno_db,
        trials=done,
        errors=errors,
        cer=errors / done,
        ml_lb_errors=ml_errors,
        ml_lb=ml_errors / done,
    )


def sweep(
    code: CodeInstance,
    graph: TannerGraph,
    ebno_list,
    bp_cfg: BpConfig,
    lgs_cfg: LgsConfig | None,
    *,
    trials: int,
    seed: int,
    rate: float | None = None,
    out_path: str | None = None,
    workers: int = 1,
    message_mode: str = "random",
    check_membership: bool = False,
    progress_every: int = 0,
    min_errors: int = 0,
) -> list[CerPoint]:
    """CER at each Eb/N0 of the grid, optionally written to CSV in grid
    order.  The same seed is reused at every point, so the underlying
    noise realizations are common across the grid."""
    if rate is None:
        rate = code.k / code.n
    points = []
    for ebno in ebno_list:
        ch_cfg = ChannelConfig(ebno_db=float(ebno), rate=rate, seed=seed, trials=trials)
        points.append(
            run_point(
                code, graph, bp_cfg, lgs_cfg, ch_cfg,
                workers=workers,
                message_mode=message_mode,
                check_membership=check_membership,
                progress_every=progress_every,
                min_errors=min_errors,
            )
        )
    if out_path is not None:
        write_csv(points, out_path)
    return points


def format_point(p: CerPoint) -> str:
    return (
        f"{p.ebno_db:.10g},{p.trials},{p.errors},{p.cer:.10g},"
        f"{p.ml_lb_errors},{p.ml_lb:.10g}"
    )


def write_csv(points, path: str) -> None:
    try:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(CSV_HEADER + "\n")
            for p in points:
                fh.write(format_point(p) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def rate_gap_db(k_a: int, k_b: int) -> float:
    """Eb/N0 shift 10*log10(k_a/k_b) between two codes of equal length,
    equal error-correcting performance assumed."""
    if k_a <= 0 or k_b <= 0:
        raise ValueError("dimensions must be positive")
    return 10.0 * math.log10(k_a / k_b)
