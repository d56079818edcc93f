"""Max-log soft-in soft-out kernels for first-order RM components.

The fast path runs a Hadamard transform followed by a max-plus butterfly
of the same shape, giving exact max-log APP values in O(n log n).  A
repetition-extended variant handles codes of the form RM(1,d) x REP(2^s)
given the label of each coordinate.  The exhaustive oracle enumerates
codewords directly and is used to pin the fast path in tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import BitMatrix

# LLR magnitudes are clipped here before any box-plus combining
SATURATION = 30.0


@dataclass
class SisoResult:
    app: np.ndarray
    extrinsic: np.ndarray
    hard: np.ndarray


def box_plus(a, b):
    """Exact pairwise LLR combination 2*atanh(tanh(a/2)*tanh(b/2)),
    computed in the numerically stable sign-min-plus-correction form.
    Inputs are clipped to +/- SATURATION first."""
    a = np.clip(a, -SATURATION, SATURATION)
    b = np.clip(b, -SATURATION, SATURATION)
    out = (
        np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))
        + np.log1p(np.exp(-np.abs(a + b)))
        - np.log1p(np.exp(-np.abs(a - b)))
    )
    return out


def _wht(x: np.ndarray) -> np.ndarray:
    """Walsh-Hadamard transform along the last axis, natural order."""
    n = x.shape[-1]
    lead = x.shape[:-1]
    out = np.array(x, dtype=np.float64, copy=True)
    h = 1
    while h < n:
        out = out.reshape(*lead, n // (2 * h), 2, h)
        s = out[..., 0, :] + out[..., 1, :]
        d = out[..., 0, :] - out[..., 1, :]
        out[..., 0, :] = s
        out[..., 1, :] = d
        out = out.reshape(*lead, n)
        h *= 2
    return out


def _siso_rm1_app(d: int, llr: np.ndarray) -> np.ndarray:
    """APP values for RM(1,d) along the last axis of llr (length 2^d).

    After the Hadamard stage, each butterfly level merges interval
    maxima P and minima Q of the codeword metrics:
      P'[i0] = max(P[i0], P[i1])   Q'[i0] = min(Q[i0], Q[i1])
      P'[i1] = max(P[i0], -Q[i1])  Q'[i1] = min(Q[i0], -P[i1])
    and app = (P + Q) / 2 at the end.
    """
    n = 1 << d
    w = _wht(llr)
    p = w.copy()
    q = w.copy()
    lead = p.shape[:-1]
    h = 1
    while h < n:
        p4 = p.reshape(*lead, n // (2 * h), 2, h)
        q4 = q.reshape(*lead, n // (2 * h), 2, h)
        p0 = p4[..., 0, :].copy()
        p1 = p4[..., 1, :].copy()
        q0 = q4[..., 0, :].copy()
        q1 = q4[..., 1, :].copy()
        p4[..., 0, :] = np.maximum(p0, p1)
        p4[..., 1, :] = np.maximum(p0, -q1)
        q4[..., 0, :] = np.minimum(q0, q1)
        q4[..., 1, :] = np.minimum(q0, -p1)
        h *= 2
    return 0.5 * (p + q)


def _result(app: np.ndarray, llr: np.ndarray) -> SisoResult:
    return SisoResult(
        app=app,
        extrinsic=app - llr,
        hard=(app < 0).astype(np.uint8),
    )


def siso_rm1(d: int, llr) -> SisoResult:
    """Exact max-log SISO for the first-order RM code of length 2^d."""
    if d < 1:
        raise ValueError("need d >= 1")
    llr = np.asarray(llr, dtype=np.float64)
    if llr.shape != (1 << d,):
        raise ValueError(f"llr must have length {1 << d}")
    return _result(_siso_rm1_app(d, llr), llr)


def siso_projected(d: int, s: int, labels, llr) -> SisoResult:
    """Exact max-log SISO for RM(1,d) with each bit repeated across a
    coordinate class of size 2^s; labels[i] gives the class of
    coordinate i.  Aggregates class LLRs, runs the length-2^d kernel,
    and broadcasts the APP back."""
    if d < 1 or s < 0:
        raise ValueError("need d >= 1 and s >= 0")
    llr = np.asarray(llr, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    n = 1 << (d + s)
    if llr.shape != (n,) or labels.shape != (n,):
        raise ValueError(f"llr and labels must have length {n}")
    counts = np.bincount(labels, minlength=1 << d)
    if counts.shape[0] != 1 << d or not np.all(counts == 1 << s):
        raise ValueError("labels do not split coordinates into equal classes")
    agg = np.zeros(1 << d)
    np.add.at(agg, labels, llr)
    app = _siso_rm1_app(d, agg)[labels]
    return _result(app, llr)


BRUTE_MAX_DIM = 20


def brute_force_siso(generator: BitMatrix, llr) -> SisoResult:
    """Max-log SISO by enumerating every codeword of the given generator.

    app[i] = (best metric with c_i = 0) - (best metric with c_i = 1),
    halved; a bit pinned to one value by the code gets +/- inf there.
    """
    k = generator.nrows
    n = generator.ncols
    if k > BRUTE_MAX_DIM:
        raise ValueError(f"exhaustion supports dimension <= {BRUTE_MAX_DIM}")
    llr = np.asarray(llr, dtype=np.float64)
    if llr.shape != (n,):
        raise ValueError(f"llr must have length {n}")
    rows = generator.to_array()
    best0 = np.full(n, -np.inf)
    best1 = np.full(n, -np.inf)
    chunk = 1 << 14
    for lo in range(0, 1 << k, chunk):
        hi = min(lo + chunk, 1 << k)
        msgs = (np.arange(lo, hi)[:, None] >> np.arange(k)[None, :]) & 1
        words = msgs.astype(np.uint8) @ rows & 1
        metrics = (1.0 - 2.0 * words) @ llr
        zero = np.where(words == 0, metrics[:, None], -np.inf)
        one = np.where(words == 1, metrics[:, None], -np.inf)
        best0 = np.maximum(best0, zero.max(axis=0))
        best1 = np.maximum(best1, one.max(axis=0))
    app = 0.5 * (best0 - best1)
    return _result(app, llr)
