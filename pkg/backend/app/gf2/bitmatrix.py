"""
backend/app/gf2/bitmatrix.py

Packed GF(2) Matrices

Rows are Python ints used as bitsets (bit j = column j); all row operations
are word-parallel XOR/AND with popcount parity.
- BitMatrix: immutable packed row matrix
- rank / echelon form / row-space membership / kernel basis / transpose
- dense (numpy) conversion for I/O
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from app.core.exceptions import DimensionMismatchError


def parity(x: int) -> int:
    """Parity of the popcount."""
    return x.bit_count() & 1


def iter_bits(x: int) -> Iterable[int]:
    """Yields positions of set bits, lowest first."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def pack_bits(bits: Sequence[int]) -> int:
    value = 0
    for position, bit in enumerate(bits):
        if bit & 1:
            value |= 1 << position
    return value


def unpack_bits(value: int, width: int) -> list[int]:
    return [(value >> position) & 1 for position in range(width)]


# ---------------------------------------------------
# Echelon Form
# ---------------------------------------------------
@dataclass(frozen=True, slots=True)
class Echelon:
    """
    Reduced row echelon form of a row set.

    `rows[i]` has column `pivots[i]` set and no other row has that bit set.
    """

    rows: tuple[int, ...]
    pivots: tuple[int, ...]
    n_cols: int

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: int) -> int:
        """Reduces `vec` against the pivots; zero iff `vec` is in the row space."""
        for row, pivot in zip(self.rows, self.pivots, strict=True):
            if (vec >> pivot) & 1:
                vec ^= row
        return vec

    def contains(self, vec: int) -> bool:
        return self.reduce(vec) == 0


def echelon(
    rows: Iterable[int], n_cols: int, column_order: Sequence[int] | None = None
) -> Echelon:
    """
    Gauss-Jordan elimination over GF(2).

    Pivots are searched in `column_order` (default: lowest column first); a
    random order yields a random information set.
    """
    work = [row for row in rows if row]
    reduced: list[int] = []
    pivots: list[int] = []
    for col in column_order if column_order is not None else range(n_cols):
        mask = 1 << col
        pivot_idx = next((i for i, row in enumerate(work) if row & mask), None)
        if pivot_idx is None:
            continue
        pivot_row = work.pop(pivot_idx)
        work = [row ^ pivot_row if row & mask else row for row in work]
        reduced = [row ^ pivot_row if row & mask else row for row in reduced]
        reduced.append(pivot_row)
        pivots.append(col)
        work = [row for row in work if row]
        if not work:
            break
    return Echelon(rows=tuple(reduced), pivots=tuple(pivots), n_cols=n_cols)


def rank(rows: Iterable[int], n_cols: int) -> int:
    return echelon(rows, n_cols).rank


def kernel_basis(rows: Iterable[int], n_cols: int) -> list[int]:
    """
    Basis of {x : <row, x> = 0 for every row}.

    One vector per free column f: bit f plus the pivot columns of the rows
    that contain f.
    """
    ech = echelon(rows, n_cols)
    pivot_set = set(ech.pivots)
    basis: list[int] = []
    for free in range(n_cols):
        if free in pivot_set:
            continue
        vec = 1 << free
        for row, pivot in zip(ech.rows, ech.pivots, strict=True):
            if (row >> free) & 1:
                vec |= 1 << pivot
        basis.append(vec)
    return basis


def complement_basis(base: Iterable[int], candidates: Iterable[int]) -> list[int]:
    """Candidates (kept verbatim) that extend span(base), greedily in order."""
    reducers: list[tuple[int, int]] = []

    def _reduce(vec: int) -> int:
        for pivot, row in reducers:
            if (vec >> pivot) & 1:
                vec ^= row
        return vec

    for row in base:
        reduced = _reduce(row)
        if reduced:
            reducers.append(((reduced & -reduced).bit_length() - 1, reduced))

    extension: list[int] = []
    for vec in candidates:
        reduced = _reduce(vec)
        if reduced:
            reducers.append(((reduced & -reduced).bit_length() - 1, reduced))
            extension.append(vec)
    return extension


def transpose(rows: Sequence[int], n_cols: int) -> list[int]:
    columns = [0] * n_cols
    for i, row in enumerate(rows):
        for j in iter_bits(row):
            columns[j] |= 1 << i
    return columns


# ---------------------------------------------------
# BitMatrix
# ---------------------------------------------------
@dataclass(frozen=True, slots=True)
class BitMatrix:
    """Immutable GF(2) matrix stored as packed rows."""

    rows: tuple[int, ...]
    n_cols: int
    _echelon: list[Echelon] = field(default_factory=list, compare=False, repr=False)

    def __post_init__(self) -> None:
        limit = 1 << self.n_cols
        for i, row in enumerate(self.rows):
            if row < 0 or row >= limit:
                raise DimensionMismatchError(f"Row {i} does not fit in {self.n_cols} columns")

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @classmethod
    def from_dense(cls, dense: npt.ArrayLike) -> "BitMatrix":
        array = np.asarray(dense, dtype=np.uint8) & 1
        if array.ndim != 2:
            raise DimensionMismatchError("Dense matrix must be two-dimensional")
        return cls(rows=tuple(pack_bits(row.tolist()) for row in array), n_cols=array.shape[1])

    def to_dense(self) -> npt.NDArray[np.uint8]:
        out = np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
        for i, row in enumerate(self.rows):
            for j in iter_bits(row):
                out[i, j] = 1
        return out

    def echelon(self) -> Echelon:
        # cached on first use; the instance itself stays immutable
        if not self._echelon:
            self._echelon.append(echelon(self.rows, self.n_cols))
        return self._echelon[0]

    def rank(self) -> int:
        return self.echelon().rank

    def in_rowspace(self, vec: int) -> bool:
        return self.echelon().contains(vec)

    def kernel_basis(self) -> list[int]:
        return kernel_basis(self.rows, self.n_cols)

    def transpose(self) -> "BitMatrix":
        return BitMatrix(rows=tuple(transpose(self.rows, self.n_cols)), n_cols=self.n_rows)

    def row_weights(self) -> list[int]:
        return [row.bit_count() for row in self.rows]

    def column_weights(self) -> list[int]:
        return [col.bit_count() for col in transpose(self.rows, self.n_cols)]

    def times_transpose_is_zero(self, other: "BitMatrix") -> bool:
        """True iff self · otherᵀ = 0 over GF(2)."""
        if self.n_cols != other.n_cols:
            raise DimensionMismatchError(
                f"Column counts differ: {self.n_cols} vs {other.n_cols}"
            )
        return all(parity(a & b) == 0 for a in self.rows for b in other.rows)
