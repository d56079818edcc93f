"""Dense GF(2) linear algebra on bit-packed integer rows.

A row vector is stored as a single Python int: bit i of the int is the
entry in column i (column 0 is the least significant bit).  XOR of two
rows is then one big-int operation, which keeps elimination loops cheap
even for rows of a few thousand columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np


class BitVector:
    """Fixed-length vector over GF(2), packed into one int."""

    __slots__ = ("bits", "n")

    def __init__(self, bits: int, n: int):
        if n < 0:
            raise ValueError("length must be non-negative")
        if bits < 0 or bits >> n:
            raise ValueError(f"value 0x{bits:x} does not fit in {n} bits")
        self.bits = bits
        self.n = n

    @classmethod
    def from_bits(cls, values: Iterable[int]) -> "BitVector":
        bits = 0
        n = 0
        for v in values:
            if v & 1:
                bits |= 1 << n
            n += 1
        return cls(bits, n)

    def to_array(self) -> np.ndarray:
        """Unpacked 0/1 entries as a uint8 array of length n."""
        return np.array([(self.bits >> i) & 1 for i in range(self.n)], dtype=np.uint8)

    def support(self) -> tuple[int, ...]:
        """Indices of the nonzero entries, ascending."""
        return tuple(i for i in range(self.n) if (self.bits >> i) & 1)

    def weight(self) -> int:
        return self.bits.bit_count()

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __iter__(self) -> Iterator[int]:
        return ((self.bits >> i) & 1 for i in range(self.n))

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.n != other.n:
            raise ValueError("length mismatch")
        return BitVector(self.bits ^ other.bits, self.n)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BitVector)
            and self.n == other.n
            and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return hash((self.bits, self.n))

    def __repr__(self) -> str:
        body = "".join(str((self.bits >> i) & 1) for i in range(self.n))
        return f"BitVector({body})"


@dataclass(frozen=True)
class BitMatrix:
    """Matrix over GF(2); rows stored as packed ints, all of width ncols."""

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self):
        for r in self.rows:
            if r < 0 or (self.ncols >= 0 and r >> self.ncols):
                raise ValueError("row does not fit in ncols bits")

    @classmethod
    def from_rows(cls, rows: Sequence[Iterable[int]], ncols: int | None = None) -> "BitMatrix":
        packed = []
        width = ncols
        for row in rows:
            v = BitVector.from_bits(row)
            if width is None:
                width = v.n
            elif v.n != width:
                raise ValueError("ragged rows")
            packed.append(v.bits)
        if width is None:
            raise ValueError("cannot infer ncols from an empty matrix")
        return cls(tuple(packed), width)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def row(self, i: int) -> BitVector:
        return BitVector(self.rows[i], self.ncols)

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            for j in range(self.ncols):
                out[i, j] = (r >> j) & 1
        return out


def rref(mat: BitMatrix) -> tuple[BitMatrix, tuple[int, ...]]:
    """Reduced row echelon form.

    Returns (R, pivots) where R keeps only the nonzero rows, ordered by
    pivot column, and pivots lists the pivot columns ascending.  R is a
    canonical representative of the row space.
    """
    rows = list(mat.rows)
    pivots = []
    rank_so_far = 0
    for col in range(mat.ncols):
        mask = 1 << col
        pivot_row = None
        for i in range(rank_so_far, len(rows)):
            if rows[i] & mask:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[rank_so_far], rows[pivot_row] = rows[pivot_row], rows[rank_so_far]
        pr = rows[rank_so_far]
        for i in range(len(rows)):
            if i != rank_so_far and rows[i] & mask:
                rows[i] ^= pr
        pivots.append(col)
        rank_so_far += 1
    return BitMatrix(tuple(rows[:rank_so_far]), mat.ncols), tuple(pivots)


def rank(mat: BitMatrix) -> int:
    """Rank over GF(2)."""
    return rref(mat)[0].nrows


def row_space_basis(mat: BitMatrix) -> BitMatrix:
    """Canonical (reduced echelon) basis of the row space."""
    return rref(mat)[0]


def solve_membership(mat: BitMatrix, vec: BitVector) -> BitVector | None:
    """Solve x * mat = vec; returns one solution x, or None if vec is
    outside the row space."""
    if vec.n != mat.ncols:
        raise ValueError("length mismatch")
    # eliminate with a combination tag attached to every working row
    work = [(r, 1 << i) for i, r in enumerate(mat.rows)]
    residual = vec.bits
    combo = 0
    rank_so_far = 0
    for col in range(mat.ncols):
        mask = 1 << col
        pivot_row = None
        for i in range(rank_so_far, len(work)):
            if work[i][0] & mask:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        work[rank_so_far], work[pivot_row] = work[pivot_row], work[rank_so_far]
        pr, pt = work[rank_so_far]
        for i in range(len(work)):
            if i != rank_so_far and work[i][0] & mask:
                work[i] = (work[i][0] ^ pr, work[i][1] ^ pt)
        if residual & mask:
            residual ^= pr
            combo ^= pt
        rank_so_far += 1
    if residual:
        return None
    return BitVector(combo, mat.nrows)


def transpose(mat: BitMatrix) -> BitMatrix:
    out = []
    for col in range(mat.ncols):
        v = 0
        for i, r in enumerate(mat.rows):
            if (r >> col) & 1:
                v |= 1 << i
        out.append(v)
    return BitMatrix(tuple(out), mat.nrows)


def kron(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Kronecker product; entry ((i,k),(j,l)) = a[i,j] * b[k,l].

    Column index of the result is j * b.ncols + l, so the b factor
    occupies the fast-varying (least significant) part of the index.
    """
    out = []
    for ar in a.rows:
        for br in b.rows:
            row = 0
            rest = ar
            while rest:
                j = (rest & -rest).bit_length() - 1
                row |= br << (j * b.ncols)
                rest &= rest - 1
            out.append(row)
    return BitMatrix(tuple(out), a.ncols * b.ncols)


def vector_from_array(values: Sequence[int] | np.ndarray) -> BitVector:
    """Pack a 0/1 sequence (numpy array or list) into a BitVector."""
    return BitVector.from_bits(int(v) & 1 for v in values)


def pack_int(values: np.ndarray) -> int:
    """Pack a 0/1 numpy array into an int, entry i at bit i."""
    b = np.packbits(np.asarray(values, dtype=np.uint8), bitorder="little")
    return int.from_bytes(b.tobytes(), "little")
