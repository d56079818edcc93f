"""Construction of recursive subproduct subcodes of Reed-Muller codes.

The family lives between first- and second-order Reed-Muller codes: take
RM(2, m*m') and keep only the monomials that touch each length-m' block
of variables in at most one position.  Equivalently, build the code
recursively from m-fold subproducts of a small base code.  Both routes
are implemented; they generate the same row space.

Coordinates use the natural evaluation order: coordinate p corresponds
to the point (p_1, ..., p_v) with p - 1 = p_1 + 2 p_2 + ... (the first
variable toggles fastest), written 0-based as bit j of p for variable
x_{j+1}.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import gf2
from .gf2 import BitMatrix, BitVector


@dataclass(frozen=True)
class CodeSpec:
    """Parameters of one member of the family.

    m blocks of m_prime variables each; order r of the outer product
    structure and order r_prime of the base Reed-Muller code.  The main
    family of interest is r=2, r_prime=1 with m, m_prime >= 2.
    """

    m: int
    m_prime: int
    r: int = 2
    r_prime: int = 1

    def __post_init__(self):
        if self.m < 1 or self.m_prime < 1:
            raise ValueError("need m >= 1 and m_prime >= 1")
        if not 0 <= self.r <= self.m:
            raise ValueError("need 0 <= r <= m")
        if not 1 <= self.r_prime <= self.m_prime:
            raise ValueError("need 1 <= r_prime <= m_prime")

    @property
    def v(self) -> int:
        """Total number of variables."""
        return self.m * self.m_prime

    @property
    def n(self) -> int:
        """Block length."""
        return 1 << self.v


def blocks(m: int, m_prime: int) -> list[frozenset[int]]:
    """Partition of variables {1..m*m'} into m consecutive blocks of m'."""
    return [
        frozenset(range(i * m_prime + 1, (i + 1) * m_prime + 1)) for i in range(m)
    ]


def eval_monomial(variables: Iterable[int], v: int) -> BitVector:
    """Evaluation vector of the monomial prod_{j in variables} x_j over
    F_2^v in natural order.  Empty set gives the all-ones vector.

    Variable indices are 1-based.
    """
    n = 1 << v
    word = (1 << n) - 1
    for j in variables:
        if not 1 <= j <= v:
            raise ValueError(f"variable x_{j} outside 1..{v}")
        # positions p with bit (j-1) set, as one packed mask
        lo = (1 << (1 << (j - 1))) - 1
        period = lo << (1 << (j - 1))
        mask = 0
        shift = 0
        while shift < n:
            mask |= period << shift
            shift += 1 << j
        word &= mask
    return BitVector(word, n)


def monomial_basis(spec: CodeSpec) -> list[tuple[int, ...]]:
    """Monomials spanning the code: unions S = S_1 | ... | S_m with
    S_i inside block i, |S_i| <= r', and at most r blocks touched.

    Listed by total degree, then lexicographically; each monomial is the
    sorted tuple of its (1-based) variable indices.
    """
    block_of = {}
    for b, members in enumerate(blocks(spec.m, spec.m_prime)):
        for j in members:
            block_of[j] = b
    out: list[tuple[int, ...]] = []
    max_deg = spec.r * spec.r_prime
    for deg in range(max_deg + 1):
        for combo in itertools.combinations(range(1, spec.v + 1), deg):
            per_block: dict[int, int] = {}
            for j in combo:
                per_block[block_of[j]] = per_block.get(block_of[j], 0) + 1
            if len(per_block) > spec.r:
                continue
            if any(c > spec.r_prime for c in per_block.values()):
                continue
            out.append(combo)
    return out


def dimension_formula(spec: CodeSpec) -> int:
    """Dimension sum_{i=0}^{r} C(m,i) * (k0 - 1)^i with k0 the base code
    dimension sum_{j<=r'} C(m',j)."""
    k0 = sum(math.comb(spec.m_prime, j) for j in range(spec.r_prime + 1))
    return sum(math.comb(spec.m, i) * (k0 - 1) ** i for i in range(spec.r + 1))


def min_distance_formula(spec: CodeSpec) -> int:
    """Minimum distance d^r * n0^(m-r) with [n0, k0, d] the base code."""
    d0 = 1 << (spec.m_prime - spec.r_prime)
    n0 = 1 << spec.m_prime
    return d0**spec.r * n0 ** (spec.m - spec.r)


@dataclass
class CodeInstance:
    """A constructed code: generator matrix plus cached derived data."""

    spec: CodeSpec
    n: int
    k: int
    dmin: int
    generator: BitMatrix
    monomials: list[tuple[int, ...]]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def _echelon(self) -> tuple[BitMatrix, tuple[int, ...]]:
        ech = self._cache.get("echelon")
        if ech is None:
            ech = gf2.rref(self.generator)
            if ech[0].nrows != self.k:
                raise ValueError("generator rows are not independent")
            self._cache["echelon"] = ech
        return ech

    @property
    def information_set(self) -> tuple[int, ...]:
        """First k pivot columns of the generator's echelon form."""
        return self._echelon()[1]

    def reduce(self, word: int) -> int:
        """Reduce a packed word modulo the code; zero iff in the code."""
        rows, pivots = self._echelon()
        for col, row in zip(pivots, rows.rows):
            if (word >> col) & 1:
                word ^= row
        return word


def build_code(spec: CodeSpec) -> CodeInstance:
    """Build the code from its monomial basis."""
    monomials = monomial_basis(spec)
    rows = tuple(eval_monomial(s, spec.v).bits for s in monomials)
    gen = BitMatrix(rows, spec.n)
    k = dimension_formula(spec)
    if len(monomials) != k:
        raise AssertionError("monomial count disagrees with dimension formula")
    code = CodeInstance(
        spec=spec,
        n=spec.n,
        k=k,
        dmin=min_distance_formula(spec),
        generator=gen,
        monomials=monomials,
    )
    code._echelon()  # verifies full rank
    return code


def _base_generator(spec: CodeSpec) -> BitMatrix:
    """Generator of the base code RM(r', m'): all-ones row, then the
    rows of the degree 1..r' monomials."""
    return rm_generator(spec.r_prime, spec.m_prime)


def _sub_generator(spec: CodeSpec) -> BitMatrix:
    """Rows eval(x_S) for 1 <= |S| <= r' over the m' base variables (the
    base generator without its all-ones row)."""
    rows = []
    for deg in range(1, spec.r_prime + 1):
        for combo in itertools.combinations(range(1, spec.m_prime + 1), deg):
            rows.append(eval_monomial(combo, spec.m_prime).bits)
    return BitMatrix(tuple(rows), 1 << spec.m_prime)


def build_generator_recursive(spec: CodeSpec) -> BitMatrix:
    """Generator built by the two-branch subproduct recursion.

    Same row space as the monomial construction; the rows themselves
    come out in recursion order, not echelon order.
    """
    g_base = _base_generator(spec)
    g_sub = _sub_generator(spec)
    n0 = 1 << spec.m_prime

    memo: dict[tuple[int, int], BitMatrix] = {}

    def gen(r: int, m: int) -> BitMatrix:
        key = (r, m)
        if key in memo:
            return memo[key]
        if r == 0:
            out = BitMatrix(((1 << n0**m) - 1,), n0**m)
        elif r == m:
            out = g_base
            for _ in range(m - 1):
                out = gf2.kron(out, g_base)
        else:
            ones = BitMatrix(((1 << n0) - 1,), n0)
            top = gf2.kron(gen(r, m - 1), ones)
            bottom = gf2.kron(gen(r - 1, m - 1), g_sub)
            out = BitMatrix(top.rows + bottom.rows, top.ncols)
        memo[key] = out
        return out

    return gen(spec.r, spec.m)


def rm_generator(r: int, v: int) -> BitMatrix:
    """Generator of RM(r, v): monomials of degree <= r, degree-then-lex."""
    if not 0 <= r <= v:
        raise ValueError("need 0 <= r <= v")
    rows = []
    for deg in range(r + 1):
        for combo in itertools.combinations(range(1, v + 1), deg):
            rows.append(eval_monomial(combo, v).bits)
    return BitMatrix(tuple(rows), 1 << v)


def encode(code: CodeInstance, message: Sequence[int] | BitVector) -> BitVector:
    """Encode a k-bit message as message * G (row convention)."""
    if isinstance(message, BitVector):
        msg_bits = message.bits
        length = message.n
    else:
        vec = BitVector.from_bits(message)
        msg_bits, length = vec.bits, vec.n
    if length != code.k:
        raise ValueError(f"message length {length} != k = {code.k}")
    word = 0
    rest = msg_bits
    while rest:
        i = (rest & -rest).bit_length() - 1
        word ^= code.generator.rows[i]
        rest &= rest - 1
    return BitVector(word, code.n)


def contains(code: CodeInstance, word: BitVector | Sequence[int]) -> bool:
    """Membership test against the cached echelon form."""
    if not isinstance(word, BitVector):
        word = BitVector.from_bits(word)
    if word.n != code.n:
        raise ValueError("length mismatch")
    return code.reduce(word.bits) == 0
