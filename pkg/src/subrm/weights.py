"""Exact minimum-weight and weight-distribution analysis of the code family.

Minimum-weight codewords are counted in closed form and enumerated from
rank-constrained 2 x v witness matrices.  Full weight distributions come
from counting block-symplectic matrices by rank (a pad-two-columns
recurrence, evaluated in exact rational arithmetic) and aggregating
per-coset weight tables.  The exhaustive oracles used by the test suite
live here as well.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from . import gf2
from .codebook import (
    CodeInstance,
    CodeSpec,
    blocks,
    dimension_formula,
    eval_monomial,
)
from .gf2 import BitMatrix, BitVector

# resource guards for the enumeration / exhaustion routines
ENUM_MAX_N = 512
BRUTE_MAX_K = 24
BRUTE_MAX_CELLS = 24


@dataclass(frozen=True)
class MinWeightWitness:
    """Two independent affine conditions carving one codeword support.

    a is a 2 x v matrix in reduced echelon form; the support of the
    codeword is {alpha : a1.alpha = b1 and a2.alpha = b2}.
    """

    a: BitMatrix
    b1: int
    b2: int


@dataclass
class RankCountTable:
    """Counts of block-symplectic matrices by rank h."""

    m_prime: int
    entries: dict[int, int]

    def __getitem__(self, h: int) -> int:
        return self.entries.get(h, 0)

    def total(self) -> int:
        return sum(self.entries.values())


@dataclass
class WeightDistribution:
    """Map weight -> codeword count for a code (or coset) of length n."""

    entries: dict[int, int]
    n: int

    def __getitem__(self, w: int) -> int:
        return self.entries.get(w, 0)

    def total(self) -> int:
        return sum(self.entries.values())


# ---------------------------------------------------------------------------
# minimum-weight counting and enumeration


def count_min_weight(m: int, m_prime: int) -> int:
    """Exact number of minimum-weight codewords of the (m, m') code:
    (2/3) * ((3*2^m' - 2)^m - 3*2^(m*m') + 2)."""
    if m < 2 or m_prime < 2:
        raise ValueError("need m, m_prime >= 2")
    val = (3 * 2**m_prime - 2) ** m - 3 * 2 ** (m * m_prime) + 2
    if val % 3:
        raise ArithmeticError("count formula not divisible by 3")
    return 2 * (val // 3)


def count_min_weight_rm2(v: int) -> int:
    """Minimum-weight codeword count of the full second-order RM code of
    length N = 2^v: (2/3) * (N^2 - 3N + 2)."""
    n = 2**v
    val = n * n - 3 * n + 2
    if val % 3:
        raise ArithmeticError("count formula not divisible by 3")
    return 2 * (val // 3)


def count_valid_A(m: int, m_prime: int) -> int:
    """Number of 2 x (m*m') matrices with full rank 2 whose every
    per-block 2 x m' submatrix has rank at most 1."""
    if m < 2 or m_prime < 2:
        raise ValueError("need m, m_prime >= 2")
    return (3 * 2**m_prime - 2) ** m - (3 * 2 ** (m * m_prime) - 2)


def _require_main_family(spec: CodeSpec) -> None:
    if spec.r != 2 or spec.r_prime != 1 or spec.m < 2 or spec.m_prime < 2:
        raise ValueError("minimum-weight analysis needs r=2, r'=1, m, m' >= 2")


def _block_dependent(x: int, y: int, m: int, m_prime: int) -> bool:
    """True when every per-block pair of m'-bit slices of x, y is
    linearly dependent (block rank <= 1)."""
    bm = (1 << m_prime) - 1
    for i in range(m):
        bx = (x >> (i * m_prime)) & bm
        by = (y >> (i * m_prime)) & bm
        if bx and by and bx != by:
            return False
    return True


def _valid_pairs(spec: CodeSpec) -> list[tuple[int, int]]:
    """Canonical representatives of the valid 2-dimensional row spaces:
    the two numerically smallest nonzero elements (x, y) of each space,
    filtered by the per-block rank condition."""
    nvals = 1 << spec.v
    out = []
    for y in range(2, nvals):
        for x in range(1, y):
            if (x ^ y) > y and _block_dependent(x, y, spec.m, spec.m_prime):
                out.append((x, y))
    return out


def min_weight_witnesses(
    spec: CodeSpec, chunk: tuple[int, int] | None = None
) -> Iterator[MinWeightWitness]:
    """Yield one witness per minimum-weight codeword: echelon basis of a
    valid 2-dimensional space plus one of the 4 offset pairs (b1, b2).

    chunk = (start, stop) restricts to a slice of the flat witness index
    space (space index * 4 + offset index); disjoint chunks partition
    the full enumeration and can be merged by union.
    """
    _require_main_family(spec)
    if spec.n > ENUM_MAX_N:
        raise ValueError(f"enumeration supports n <= {ENUM_MAX_N}, got n={spec.n}")
    pairs = _valid_pairs(spec)
    total = 4 * len(pairs)
    start, stop = chunk if chunk is not None else (0, total)
    if not 0 <= start <= stop <= total:
        raise ValueError("chunk out of range")
    for idx in range(start, stop):
        x, y = pairs[idx // 4]
        b = idx % 4
        basis, _ = gf2.rref(BitMatrix((x, y), spec.v))
        yield MinWeightWitness(a=basis, b1=b & 1, b2=(b >> 1) & 1)


def witness_support(witness: MinWeightWitness, v: int) -> BitVector:
    """Codeword whose support solves both affine conditions of the witness."""
    n = 1 << v
    full = (1 << n) - 1
    word = full
    for row, b in ((witness.a.rows[0], witness.b1), (witness.a.rows[1], witness.b2)):
        pm = 0
        rest = row
        while rest:
            j = (rest & -rest).bit_length() - 1
            pm ^= eval_monomial((j + 1,), v).bits
            rest &= rest - 1
        word &= pm if b else pm ^ full
    return BitVector(word, n)


def enumerate_min_weight(
    code: CodeInstance, chunk: tuple[int, int] | None = None
) -> set[BitVector]:
    """All minimum-weight codewords of the code, built from witnesses.

    Accepts the same chunk contract as min_weight_witnesses; chunks merge
    by set union.
    """
    spec = code.spec
    out = set()
    want = spec.n >> 2
    for w in min_weight_witnesses(spec, chunk):
        word = witness_support(w, spec.v)
        if word.weight() != want:
            raise AssertionError("witness support has wrong weight")
        out.add(word)
    return out


# ---------------------------------------------------------------------------
# rank-count recurrences (exact rational arithmetic)


def _p2(e: int) -> Fraction:
    return Fraction(2) ** e


def _as_count(total: Fraction, m: int, h: int) -> int:
    if total.denominator != 1:
        raise ArithmeticError(f"non-integer rank count at (m={m}, h={h}): {total}")
    val = int(total)
    if val < 0:
        raise ArithmeticError(f"negative rank count at (m={m}, h={h}): {val}")
    return val


@lru_cache(maxsize=None)
def rank_count_N2(m: int, h: int) -> int:
    """Number of rank-h matrices among the m'=2 block-symplectic family,
    by a three-term pad-one-block recurrence in m."""
    if m < 1 or h < 0 or h > 2 * m:
        return 0
    if h == 0:
        return 1
    if m == 1:
        return 0
    t1 = _p2(h - 1) + _p2(2 * h - 1)
    t2 = 3 * _p2(2 * m - 4 + h) - 5 * _p2(2 * h - 5) - _p2(h - 3)
    t3 = -3 * _p2(2 * m - 6 + h) + Fraction(4) ** (2 * m - 2) + _p2(2 * h - 7)
    total = (
        t1 * rank_count_N2(m - 1, h)
        + t2 * rank_count_N2(m - 1, h - 2)
        + t3 * rank_count_N2(m - 1, h - 4)
    )
    return _as_count(total, m, h)


@lru_cache(maxsize=None)
def rank_count_N3(m: int, h: int) -> int:
    """Number of rank-h matrices among the m'=3 block-symplectic family,
    by a four-term recurrence in m."""
    if m < 1 or h < 0 or h > 3 * m:
        return 0
    if h == 0:
        return 1
    if m == 1:
        return 0
    t1 = _p2(3 * h - 3) + 7 * _p2(2 * h - 3)
    t2 = (
        (_p2(3 * m - 3) - _p2(h - 2)) * (_p2(2 * h - 3) + _p2(h) + 1)
        + (_p2(3 * m - 3) - _p2(h - 3)) * (_p2(2 * h - 4) + _p2(h - 1) - 3)
        + (_p2(3 * m - 3) - _p2(h - 4)) * (_p2(2 * h - 5) - 5 * _p2(h - 3) + 2)
    )
    t3 = (_p2(3 * m - 3) - _p2(h - 4)) * (
        7 * _p2(3 * m + h - 7) - 21 * _p2(2 * h - 9) - 7 * _p2(h - 5)
    )
    # the i=4..6 product; its exponent follows h like every sibling term
    t4 = math.prod((_p2(3 * m - 3) - _p2(h - i)) for i in range(4, 7))
    total = (
        t1 * rank_count_N3(m - 1, h)
        + t2 * rank_count_N3(m - 1, h - 2)
        + t3 * rank_count_N3(m - 1, h - 4)
        + t4 * rank_count_N3(m - 1, h - 6)
    )
    return _as_count(total, m, h)


def rank_count_table(m: int, m_prime: int) -> RankCountTable:
    """All nonzero N(m, h) values for one of the supported families."""
    if m_prime == 2:
        fn, hmax = rank_count_N2, 2 * m
    elif m_prime == 3:
        fn, hmax = rank_count_N3, 3 * m
    else:
        raise ValueError("rank counts available only for m_prime in {2, 3}")
    entries = {}
    for h in range(0, hmax + 1, 2):
        val = fn(m, h)
        if val:
            entries[h] = val
    return RankCountTable(m_prime, entries)


# ---------------------------------------------------------------------------
# coset weight tables and full weight distribution


def coset_weight_table(v: int, h: int) -> WeightDistribution:
    """Weight distribution of one coset of the first-order RM code inside
    the second-order RM code of length 2^v, for coset rank h.

    Three rows: weights 2^(v-1) -/+ 2^(v-1-h/2) with count 2^h each, and
    the middle weight 2^(v-1) with count 2^(v+1) - 2^(h+1).
    """
    if h % 2:
        raise ValueError("coset rank h must be even")
    if not 0 <= h <= v:
        raise ValueError("need 0 <= h <= v")
    mid = 1 << (v - 1)
    off = 1 << (v - 1 - h // 2)
    entries = {
        mid - off: 1 << h,
        mid: (1 << (v + 1)) - (1 << (h + 1)),
        mid + off: 1 << h,
    }
    return WeightDistribution(entries, 1 << v)


def weight_distribution(m: int, m_prime: int) -> WeightDistribution:
    """Exact weight distribution of the (m, m') code, as the rank-count
    weighted sum of coset weight tables."""
    if m < 2:
        raise ValueError("need m >= 2")
    if m_prime not in (2, 3):
        raise ValueError(
            "weight distribution supported only for m_prime in {2, 3}"
        )
    v = m * m_prime
    table = rank_count_table(m, m_prime)
    agg: dict[int, int] = defaultdict(int)
    for h, cnt in table.entries.items():
        for w, c in coset_weight_table(v, h).entries.items():
            agg[w] += cnt * c
    entries = {w: c for w, c in sorted(agg.items()) if c}
    dist = WeightDistribution(entries, 1 << v)
    k = dimension_formula(CodeSpec(m, m_prime))
    if dist.total() != 1 << k:
        raise ArithmeticError("weight distribution does not sum to 2^k")
    return dist


# ---------------------------------------------------------------------------
# exhaustive oracles


def brute_force_weight_distribution(code: CodeInstance) -> WeightDistribution:
    """Distribution by enumerating all 2^k codewords with Gray-code
    message stepping (one row XOR per codeword)."""
    if code.k > BRUTE_MAX_K:
        raise ValueError(f"exhaustion supports k <= {BRUTE_MAX_K}, got k={code.k}")
    counts: dict[int, int] = defaultdict(int)
    word = 0
    counts[0] = 1
    rows = code.generator.rows
    for i in range(1, 1 << code.k):
        word ^= rows[(i & -i).bit_length() - 1]
        counts[word.bit_count()] += 1
    return WeightDistribution(dict(sorted(counts.items())), code.n)


def iter_block_symplectic(m: int, m_prime: int) -> Iterator[BitMatrix]:
    """All symmetric zero-diagonal matrices whose m' x m' diagonal blocks
    are zero, i.e. the coset representatives of the first-order RM code
    inside the (m, m') code."""
    v = m * m_prime
    cells = [
        (bi * m_prime + p, bj * m_prime + q)
        for bi, bj in itertools.combinations(range(m), 2)
        for p in range(m_prime)
        for q in range(m_prime)
    ]
    if len(cells) > BRUTE_MAX_CELLS:
        raise ValueError(f"enumeration supports at most {BRUTE_MAX_CELLS} free cells")
    for assignment in range(1 << len(cells)):
        rows = [0] * v
        rest = assignment
        while rest:
            t = (rest & -rest).bit_length() - 1
            i, j = cells[t]
            rows[i] |= 1 << j
            rows[j] |= 1 << i
            rest &= rest - 1
        yield BitMatrix(tuple(rows), v)


def brute_force_rank_counts(m: int, m_prime: int) -> RankCountTable:
    """Rank histogram over the full block-symplectic family."""
    counts: dict[int, int] = defaultdict(int)
    for mat in iter_block_symplectic(m, m_prime):
        counts[gf2.rank(mat)] += 1
    return RankCountTable(m_prime, dict(sorted(counts.items())))


# ---------------------------------------------------------------------------
# small-scale optimality search over row removals


@dataclass
class RemovalCandidate:
    removed: tuple[tuple[int, ...], ...]
    dmin: int
    min_weight_count: int


@dataclass
class OptimalitySearchReport:
    candidates: list[RemovalCandidate]
    min_count: int
    minimizers: list[tuple[tuple[int, ...], ...]]
    block_pattern: tuple[tuple[int, ...], ...]


def optimality_search(m: int = 2, m_prime: int = 2) -> OptimalitySearchReport:
    """Try every way of removing C(m',2)*m degree-2 rows from the
    second-order RM generator and count minimum-weight words of each
    resulting subcode.  Confirms that the same-block removal pattern
    minimizes the count."""
    v = m * m_prime
    deg2 = list(itertools.combinations(range(1, v + 1), 2))
    remove_count = math.comb(m_prime, 2) * m
    n_candidates = math.comb(len(deg2), remove_count)
    k_sub = 1 + v + len(deg2) - remove_count
    if n_candidates > 100 or k_sub > BRUTE_MAX_K:
        raise ValueError(
            f"search space too large: {n_candidates} candidates at k={k_sub}"
        )
    base_rows = [eval_monomial((), v).bits]
    base_rows += [eval_monomial((j,), v).bits for j in range(1, v + 1)]
    deg2_rows = {s: eval_monomial(s, v).bits for s in deg2}

    block_of = {}
    for b, members in enumerate(blocks(m, m_prime)):
        for j in members:
            block_of[j] = b
    block_pattern = tuple(
        s for s in deg2 if block_of[s[0]] == block_of[s[1]]
    )

    candidates = []
    for removed in itertools.combinations(deg2, remove_count):
        rows = tuple(base_rows) + tuple(
            deg2_rows[s] for s in deg2 if s not in removed
        )
        counts: dict[int, int] = defaultdict(int)
        word = 0
        for i in range(1, 1 << len(rows)):
            word ^= rows[(i & -i).bit_length() - 1]
            counts[word.bit_count()] += 1
        dmin = min(counts)
        candidates.append(RemovalCandidate(removed, dmin, counts[dmin]))

    min_count = min(c.min_weight_count for c in candidates)
    minimizers = [
        c.removed for c in candidates if c.min_weight_count == min_count
    ]
    if block_pattern not in minimizers:
        raise AssertionError("same-block removal did not attain the minimum")
    return OptimalitySearchReport(candidates, min_count, minimizers, block_pattern)
