"""Projection belief propagation with product-code checks, plus an
information-set fallback and a local graph search refinement stage.

Each nonzero difference a defines a projection node: coordinate pairs
(alpha, alpha + a) are combined by box-plus and the pair channel is
decoded as a repetition-extended first-order RM code determined by the
invariant subspace of a.  Product nodes decode every axis line as the
base first-order code.  Extrinsics from both families are damped and
accumulated into the posterior.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import gf2, siso
from .codebook import CodeInstance, contains
from .gf2 import BitMatrix, BitVector
from .weights import ENUM_MAX_N, enumerate_min_weight


@dataclass(frozen=True)
class BpConfig:
    max_iters: int = 100
    w_proj: float = 0.006
    w_prod: float = 0.2

    def __post_init__(self) -> None:
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not (0 < self.w_proj <= 1 and 0 < self.w_prod <= 1):
            raise ValueError("damping weights must lie in (0, 1]")


@dataclass(frozen=True)
class LgsConfig:
    path_len: int
    neighbor_mode: str = "exhaustive"

    def __post_init__(self) -> None:
        if self.path_len < 0:
            raise ValueError("path_len must be >= 0")
        if self.neighbor_mode not in ("exhaustive", "greedy"):
            raise ValueError("neighbor_mode must be 'exhaustive' or 'greedy'")


@dataclass
class DecodeResult:
    codeword: BitVector | None
    converged: bool
    iterations: int
    metric: float
    posterior: np.ndarray | None = None


@dataclass
class ProjectionNode:
    a: int
    reps: np.ndarray
    partners: np.ndarray
    ua_basis: BitMatrix
    d: int
    labels: np.ndarray


@dataclass
class _NodeGroup:
    # projection nodes sharing the same projected dimension d, with the
    # pair arrays pre-ordered label-major for contiguous aggregation
    d: int
    s: int
    node_ids: np.ndarray
    rep_idx: np.ndarray
    par_idx: np.ndarray


@dataclass
class TannerGraph:
    code: CodeInstance
    nodes: list[ProjectionNode]
    product_sets: list[np.ndarray]
    _groups: list[_NodeGroup] = field(default_factory=list)
    _prod_gather: np.ndarray | None = None


def compute_ua(a, m: int, m_prime: int) -> tuple[BitMatrix, int]:
    """Reduced basis of the invariant subspace of the difference a:
    the span of a_p e_q + a_q e_p over index pairs p < q taken from
    different blocks.  Every generator satisfies u . a = 0."""
    bits = a.bits if isinstance(a, BitVector) else int(a)
    v = m * m_prime
    if not 0 < bits < 1 << v:
        raise ValueError("a must be a nonzero v-bit vector")
    gens = []
    for p in range(v):
        for q in range(p + 1, v):
            if p // m_prime == q // m_prime:
                continue
            g = 0
            if (bits >> p) & 1:
                g ^= 1 << q
            if (bits >> q) & 1:
                g ^= 1 << p
            if g:
                gens.append(g)
    if not gens:
        raise AssertionError("invariant subspace is empty")
    basis, _ = gf2.rref(BitMatrix(tuple(gens), v))
    return basis, basis.nrows


def build_graph(code: CodeInstance) -> TannerGraph:
    """Projection and product node layout for one code instance."""
    spec = code.spec
    v, n, m, mp = spec.v, code.n, spec.m, spec.m_prime
    coords = np.arange(n)
    alpha_bits = ((coords[:, None] >> np.arange(v)[None, :]) & 1).astype(np.uint8)

    nodes = []
    for a in range(1, n):
        j = (a & -a).bit_length() - 1
        reps = coords[(coords >> j) & 1 == 0]
        partners = reps ^ a
        basis, d = compute_ua(a, m, mp)
        labels = np.zeros(len(reps), dtype=np.int64)
        for t in range(basis.nrows):
            u_bits = ((basis.rows[t] >> np.arange(v)) & 1).astype(np.uint8)
            par = (alpha_bits[reps] @ u_bits) & 1
            labels |= par.astype(np.int64) << t
        counts = np.bincount(labels, minlength=1 << d)
        if counts.shape[0] != 1 << d or not np.all(counts == len(reps) >> d):
            raise AssertionError("projection labels are not balanced")
        nodes.append(ProjectionNode(a, reps, partners, basis, d, labels))

    product_sets = []
    line = np.arange(1 << mp)
    for t in range(m):
        shift = t * mp
        for base in range(n):
            if (base >> shift) & ((1 << mp) - 1):
                continue
            product_sets.append(base + (line << shift))

    groups = []
    for d in sorted({node.d for node in nodes}):
        ids = np.array([i for i, node in enumerate(nodes) if node.d == d])
        rep_rows, par_rows = [], []
        for i in ids:
            order = np.argsort(nodes[i].labels, kind="stable")
            rep_rows.append(nodes[i].reps[order])
            par_rows.append(nodes[i].partners[order])
        groups.append(
            _NodeGroup(
                d=d,
                s=v - 1 - d,
                node_ids=ids,
                rep_idx=np.stack(rep_rows),
                par_idx=np.stack(par_rows),
            )
        )

    prod_gather = np.stack(
        [
            np.stack(product_sets[t * (n >> mp) : (t + 1) * (n >> mp)])
            for t in range(m)
        ]
    )
    return TannerGraph(code, nodes, product_sets, groups, prod_gather)


def project_llrs(node: ProjectionNode, llr: np.ndarray) -> np.ndarray:
    """Pairwise box-plus channel for one projection node, ordered by the
    node's rep coordinates."""
    llr = np.asarray(llr, dtype=np.float64)
    return siso.box_plus(llr[node.reps], llr[node.partners])


def ml_metric(llr, codeword) -> float:
    """Correlation metric sum((1-2c) * llr); the ML word maximizes it."""
    llr = np.asarray(llr, dtype=np.float64)
    if isinstance(codeword, BitVector):
        codeword = codeword.to_array()
    c = np.asarray(codeword, dtype=np.float64)
    return float(np.dot(1.0 - 2.0 * c, llr))


def bp_decode(
    code: CodeInstance,
    graph: TannerGraph,
    channel_llr,
    cfg: BpConfig = BpConfig(),
) -> DecodeResult:
    """Flooding belief propagation over the projection and product nodes.

    Messages to a node are posterior minus that node's damped extrinsic;
    the posterior is rebuilt each iteration from the channel LLRs and
    all damped extrinsics.  Convergence means the posterior hard
    decision is a codeword, checked after every iteration."""
    llr = np.asarray(channel_llr, dtype=np.float64)
    n = code.n
    if llr.shape != (n,):
        raise ValueError(f"channel_llr must have length {n}")
    m = code.spec.m
    mp = code.spec.m_prime
    n_nodes = len(graph.nodes)
    e_proj = np.zeros((n_nodes, n))
    e_prod = np.zeros((m, n))
    post = llr.copy()

    for it in range(1, cfg.max_iters + 1):
        new_proj = np.empty_like(e_proj)
        for grp in graph._groups:
            msgs = post[None, :] - cfg.w_proj * e_proj[grp.node_ids]
            mr = np.take_along_axis(msgs, grp.rep_idx, axis=1)
            mpar = np.take_along_axis(msgs, grp.par_idx, axis=1)
            pair = siso.box_plus(mr, mpar)
            shape3 = (len(grp.node_ids), 1 << grp.d, 1 << grp.s)
            agg = pair.reshape(shape3).sum(axis=2)
            app = siso._siso_rm1_app(grp.d, agg)
            pair_ext = (app[:, :, None] - pair.reshape(shape3)).reshape(pair.shape)
            buf = np.empty_like(msgs)
            np.put_along_axis(buf, grp.rep_idx, siso.box_plus(pair_ext, mpar), axis=1)
            np.put_along_axis(buf, grp.par_idx, siso.box_plus(pair_ext, mr), axis=1)
            new_proj[grp.node_ids] = buf

        new_prod = np.empty_like(e_prod)
        for t in range(m):
            msg = post - cfg.w_prod * e_prod[t]
            vals = msg[graph._prod_gather[t]]
            app = siso._siso_rm1_app(mp, vals)
            ext = app - vals
            new_prod[t].flat[graph._prod_gather[t].ravel()] = ext.ravel()

        e_proj = new_proj
        e_prod = new_prod
        post = llr + cfg.w_proj * e_proj.sum(axis=0) + cfg.w_prod * e_prod.sum(axis=0)

        hard = post < 0
        word = gf2.pack_int(hard)
        if code.reduce(word) == 0:
            cw = BitVector(word, n)
            return DecodeResult(cw, True, it, ml_metric(llr, hard), posterior=post)

    return DecodeResult(None, False, cfg.max_iters, float("nan"), posterior=post)


def info_set_fallback(code: CodeInstance, posterior) -> BitVector:
    """Codeword agreeing with the posterior hard decision on the
    information set: re-encode from the echelon generator's pivots."""
    posterior = np.asarray(posterior, dtype=np.float64)
    echelon, pivots = code._echelon()
    word = 0
    for row, piv in zip(echelon.rows, pivots):
        if posterior[piv] < 0:
            word ^= row
    return BitVector(word, code.n)


# ---------------------------------------------------------------------------
# local graph search


def _neighborhood(code: CodeInstance):
    """Cached minimum-weight neighbor layout: packed words, support
    indices, and the transposed 0/1 support matrix used for metric-delta
    updates."""
    cached = code._cache.get("lgs_neighborhood")
    if cached is not None:
        return cached
    words = sorted(w.bits for w in enumerate_min_weight(code))
    wt = code.n >> 2
    sup = np.empty((len(words), wt), dtype=np.int64)
    for i, w in enumerate(words):
        sup[i] = np.fromiter(BitVector(w, code.n).support(), dtype=np.int64, count=wt)
    bsup_t = np.zeros((code.n, len(words)), dtype=np.float32)
    for i in range(len(words)):
        bsup_t[sup[i], i] = 1.0
    layout = (np.array(words, dtype=object), sup, bsup_t)
    code._cache["lgs_neighborhood"] = layout
    return layout


def _lgs_exhaustive(code, llr, start, path_len):
    words, sup, bsup_t = _neighborhood(code)
    t = (1.0 - 2.0 * start.to_array()) * llr
    delta = -2.0 * (t @ bsup_t)
    cur = start.bits
    cur_metric = 0.0
    best_metric = 0.0
    best = cur
    visited = {cur}
    steps = 0
    for _ in range(path_len):
        dwork = delta.copy()
        move = -1
        while True:
            e = int(np.argmax(dwork))
            if dwork[e] == -np.inf:
                break
            if (cur ^ int(words[e])) not in visited:
                move = e
                break
            dwork[e] = -np.inf
        if move < 0:
            break
        flip = sup[move]
        cur ^= int(words[move])
        cur_metric += float(delta[move])
        told = t[flip]
        delta += 4.0 * (told @ bsup_t[flip])
        t[flip] = -told
        visited.add(cur)
        steps += 1
        if cur_metric > best_metric:
            best_metric = cur_metric
            best = cur
    return best, steps


def _half_space_parities(n: int, a: int) -> np.ndarray:
    return (np.bitwise_count(np.arange(n) & a) & 1).astype(np.uint8)


def _a2_candidates(a1: int, m: int, m_prime: int) -> np.ndarray:
    """All a2 completing a1 to a valid witness pair: per block the a2
    slice is either zero or equal to the a1 slice when that slice is
    nonzero, free otherwise; a2 itself must avoid {0, a1}."""
    bm = (1 << m_prime) - 1
    per_block = []
    for i in range(m):
        b1 = (a1 >> (i * m_prime)) & bm
        if b1:
            per_block.append((0, b1 << (i * m_prime)))
        else:
            per_block.append(tuple(b << (i * m_prime) for b in range(1 << m_prime)))
    cands = []
    for combo in itertools.product(*per_block):
        a2 = 0
        for part in combo:
            a2 |= part
        if a2 not in (0, a1):
            cands.append(a2)
    return np.array(cands, dtype=np.int64)


def _lgs_greedy(code, llr, start, path_len):
    n = code.n
    m, mp = code.spec.m, code.spec.m_prime
    t = (1.0 - 2.0 * start.to_array()) * llr
    cur = start.bits
    cur_metric = 0.0
    best_metric = 0.0
    best = cur
    visited = {cur}
    steps = 0
    idx = np.arange(n)
    for _ in range(path_len):
        g = np.maximum(0.0, -t)
        ghat = siso._wht(g)
        order = np.argsort(-np.abs(ghat[1:])) + 1
        moved = False
        for a1 in order:
            a1 = int(a1)
            b1 = 0 if ghat[a1] >= 0 else 1
            h1 = _half_space_parities(n, a1) == b1
            qhat = siso._wht(np.where(h1, t, 0.0))
            cands = _a2_candidates(a1, m, mp)
            q_at = qhat[cands]
            # both offsets b2 for every candidate a2
            deltas = np.concatenate([-(qhat[0] + q_at), -(qhat[0] - q_at)])
            b2s = np.concatenate([np.zeros(len(cands), int), np.ones(len(cands), int)])
            a2s = np.concatenate([cands, cands])
            for j in np.argsort(-deltas):
                a2 = int(a2s[j])
                h2 = _half_space_parities(n, a2) == b2s[j]
                flip = h1 & h2
                word = gf2.pack_int(flip)
                nxt = cur ^ word
                if nxt in visited:
                    continue
                cur = nxt
                cur_metric += float(deltas[j])
                t[flip] = -t[flip]
                visited.add(cur)
                steps += 1
                if cur_metric > best_metric:
                    best_metric = cur_metric
                    best = cur
                moved = True
                break
            if moved:
                break
        if not moved:
            break
    return best, steps


def lgs_decode(
    code: CodeInstance,
    llr,
    start: BitVector,
    cfg: LgsConfig,
) -> DecodeResult:
    """Walk a path of minimum-weight neighbor steps from a codeword,
    greedily maximizing the metric gain over unvisited words, and return
    the best codeword seen on the path."""
    llr = np.asarray(llr, dtype=np.float64)
    if llr.shape != (code.n,):
        raise ValueError(f"llr must have length {code.n}")
    if not contains(code, start):
        raise ValueError("start word is not a codeword")
    if cfg.neighbor_mode == "exhaustive":
        if code.n > ENUM_MAX_N:
            raise ValueError(
                f"exhaustive neighborhoods support n <= {ENUM_MAX_N}; use greedy"
            )
        best, steps = _lgs_exhaustive(code, llr, start, cfg.path_len)
    else:
        best, steps = _lgs_greedy(code, llr, start, cfg.path_len)
    cw = BitVector(best, code.n)
    return DecodeResult(cw, True, steps, ml_metric(llr, cw))


@dataclass
class PipelineResult:
    codeword: BitVector
    bp_converged: bool
    bp_iterations: int
    used_fallback: bool


def decode_pipeline(
    code: CodeInstance,
    graph: TannerGraph,
    llr,
    bp_cfg: BpConfig,
    lgs_cfg: LgsConfig | None = None,
) -> PipelineResult:
    """BP, then information-set fallback if BP failed to converge, then
    optional local graph search from the resulting codeword."""
    r = bp_decode(code, graph, llr, bp_cfg)
    if r.converged:
        word = r.codeword
    else:
        word = info_set_fallback(code, r.posterior)
    if lgs_cfg is not None and lgs_cfg.path_len > 0:
        word = lgs_decode(code, llr, word, lgs_cfg).codeword
    return PipelineResult(word, r.converged, r.iterations, not r.converged)
