"""
GF(2) matrices and vectors for the polar transform.

Rows and vectors are bit-packed Python integers: bit ``j`` holds column
(position) ``j``, counted from 0. Row selections in the public API follow the
1-based convention ``A(N, i) = G_{i+1}^N``: ``tail_rows(G, i)`` keeps the rows
after the first ``i``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence

from .config import DEFAULT_LIMITS, Limits
from .errors import CapExceededError, DimensionError

log = logging.getLogger(__name__)


def iter_bits(x: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``x`` in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def popcount(x: int) -> int:
    return bin(x).count("1")


def block_exponent(n: int) -> int:
    """Return ``k`` with ``n == 2**k``; reject anything that is not a power of two."""
    if n < 1 or n & (n - 1):
        raise DimensionError(f"block length {n} is not a power of two")
    return n.bit_length() - 1


@dataclass(frozen=True)
class BitVector:
    """
    A binary vector of fixed length.

    Attributes
    ----------
    bits : int
        Packed entries; bit ``j`` is position ``j``.
    length : int
        Number of positions.
    """

    bits: int
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise DimensionError("vector length must be nonnegative")
        if self.bits < 0 or self.bits >> self.length:
            raise DimensionError(f"bits {self.bits:#x} do not fit in length {self.length}")

    @staticmethod
    def zeros(length: int) -> BitVector:
        return BitVector(0, length)

    @staticmethod
    def ones(length: int) -> BitVector:
        return BitVector((1 << length) - 1, length)

    @staticmethod
    def from_list(lst: Sequence[int]) -> BitVector:
        bits = 0
        for j, b in enumerate(lst):
            if b not in (0, 1):
                raise DimensionError(f"entry {j} is {b!r}, expected 0 or 1")
            bits |= b << j
        return BitVector(bits, len(lst))

    def to_list(self) -> list[int]:
        return [(self.bits >> j) & 1 for j in range(self.length)]

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.length:
            raise IndexError(j)
        return (self.bits >> j) & 1

    def __iter__(self) -> Iterator[int]:
        return iter(self.to_list())

    def __xor__(self, other: BitVector) -> BitVector:
        if self.length != other.length:
            raise DimensionError(f"length mismatch: {self.length} vs {other.length}")
        return BitVector(self.bits ^ other.bits, self.length)

    def weight(self) -> int:
        return popcount(self.bits)

    def positions(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def slice(self, start: int, stop: int) -> BitVector:
        if not 0 <= start <= stop <= self.length:
            raise DimensionError(f"slice [{start}, {stop}) out of range for length {self.length}")
        return BitVector((self.bits >> start) & ((1 << (stop - start)) - 1), stop - start)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.to_list())


@dataclass(frozen=True)
class BitMatrix:
    """
    A dense binary matrix with bit-packed rows.

    A matrix may have zero rows (``A(N, N)`` is empty) but always has at
    least one column.

    Attributes
    ----------
    rows : tuple of int
        Packed rows; bit ``j`` of ``rows[r]`` is entry ``(r, j)``.
    ncols : int
        Number of columns.
    """

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self):
        if self.ncols < 1:
            raise DimensionError("a matrix needs at least one column")
        for r, row in enumerate(self.rows):
            if row < 0 or row >> self.ncols:
                raise DimensionError(f"row {r} does not fit in {self.ncols} columns")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @staticmethod
    def from_lists(lists: Sequence[Sequence[int]], ncols: Optional[int] = None) -> BitMatrix:
        if ncols is None:
            if not lists:
                raise DimensionError("ncols is required for an empty matrix")
            ncols = len(lists[0])
        rows = []
        for lst in lists:
            if len(lst) != ncols:
                raise DimensionError("ragged rows")
            rows.append(BitVector.from_list(lst).bits)
        return BitMatrix(tuple(rows), ncols)

    def to_lists(self) -> list[list[int]]:
        return [BitVector(row, self.ncols).to_list() for row in self.rows]

    def row(self, r: int) -> BitVector:
        return BitVector(self.rows[r], self.ncols)

    def is_unit_lower_triangular(self) -> bool:
        if self.nrows != self.ncols:
            return False
        return all((row >> r) == 1 for r, row in enumerate(self.rows))


@lru_cache(maxsize=32)
def _kron_rows(n: int) -> tuple[int, ...]:
    # F (x) M = [[M, 0], [M, M]] for F = [[1, 0], [1, 1]]
    rows: tuple[int, ...] = (1,)
    for level in range(n):
        width = 1 << level
        rows = rows + tuple(r | (r << width) for r in rows)
    return rows


def kron_power(n: int, limits: Limits = DEFAULT_LIMITS) -> BitMatrix:
    """
    Return ``F^{(x)n}`` over GF(2), the generator matrix ``G_N`` with ``N = 2**n``.

    Parameters
    ----------
    n : int
        Kronecker exponent, ``n >= 0``.
    limits : Limits
        ``2**n`` must not exceed ``limits.max_matrix_size``.

    Returns
    -------
    BitMatrix
        A unit lower-triangular ``2**n x 2**n`` matrix.
    """
    if n < 0:
        raise DimensionError("Kronecker exponent must be nonnegative")
    size = 1 << n
    if size > limits.max_matrix_size:
        raise CapExceededError("generator matrix", size, limits.max_matrix_size)
    return BitMatrix(_kron_rows(n), size)


def tail_rows(G: BitMatrix, i: int) -> BitMatrix:
    """Return ``A(N, i)``: the rows ``i+1 .. N`` (1-based) of ``G``."""
    if not 0 <= i <= G.nrows:
        raise DimensionError(f"row index {i} out of range 0..{G.nrows}")
    return BitMatrix(G.rows[i:], G.ncols)


def polar_tail(n_exp: int, i: int, limits: Limits = DEFAULT_LIMITS) -> BitMatrix:
    """Shorthand for ``tail_rows(kron_power(n_exp), i)``."""
    return tail_rows(kron_power(n_exp, limits), i)


def vec_mul(u: BitVector, A: BitMatrix) -> BitVector:
    """Return ``u A`` over GF(2)."""
    if len(u) != A.nrows:
        raise DimensionError(f"vector length {len(u)} does not match {A.nrows} rows")
    acc = 0
    for r in u.positions():
        acc ^= A.rows[r]
    return BitVector(acc, A.ncols)


def echelon(A: BitMatrix) -> BitMatrix:
    """
    Return the reduced row echelon form of ``A`` with its zero rows dropped.

    The pivot of a row is its lowest set column; every pivot column is clear
    in all other rows. The form is unique for a given row space.
    """
    pivots: dict[int, int] = {}
    for row in A.rows:
        while row:
            low = (row & -row).bit_length() - 1
            if low not in pivots:
                pivots[low] = row
                break
            row ^= pivots[low]
    for col in sorted(pivots):
        prow = pivots[col]
        for other, orow in pivots.items():
            if other != col and (orow >> col) & 1:
                pivots[other] = orow ^ prow
    return BitMatrix(tuple(pivots[c] for c in sorted(pivots)), A.ncols)


def rank(A: BitMatrix) -> int:
    return echelon(A).nrows


def basis(A: BitMatrix) -> tuple[int, ...]:
    """Rows of ``A`` if they are independent, otherwise its echelon rows."""
    reduced = echelon(A)
    if reduced.nrows == A.nrows:
        return A.rows
    return reduced.rows


def gray_walk(
    rows: Sequence[int], start: int = 0, stop: Optional[int] = None
) -> Iterator[tuple[int, int]]:
    """
    Walk the combinations of ``rows`` in Gray-code order.

    Step ``k`` of the walk is the XOR of the rows selected by ``k ^ (k >> 1)``.
    Consecutive steps differ by exactly one row. The walk can start at any
    ``start``, so disjoint ranges can be handed to different workers.

    Yields
    ------
    tuple of (int, int)
        The combination and the index of the row toggled to reach it
        (``-1`` for the first combination of the range).
    """
    total = 1 << len(rows)
    if stop is None:
        stop = total
    if not 0 <= start <= stop <= total:
        raise DimensionError(f"walk range [{start}, {stop}) outside [0, {total})")
    if start == stop:
        return
    mask = 0
    for r in iter_bits(start ^ (start >> 1)):
        mask ^= rows[r]
    yield mask, -1
    for k in range(start + 1, stop):
        r = (k & -k).bit_length() - 1
        mask ^= rows[r]
        yield mask, r


def row_space(
    A: BitMatrix,
    start: int = 0,
    stop: Optional[int] = None,
    limits: Limits = DEFAULT_LIMITS,
) -> Iterator[BitVector]:
    """
    Yield every vector of the row space of ``A`` exactly once.

    ``start``/``stop`` select a range of the ``2**rank(A)`` Gray-code steps.
    An empty matrix spans only the zero vector.
    """
    rows = basis(A)
    size = 1 << len(rows)
    if size > limits.max_row_space:
        raise CapExceededError("row space", size, limits.max_row_space)
    for mask, _ in gray_walk(rows, start, stop):
        yield BitVector(mask, A.ncols)


def solve_tail(A: BitMatrix, i: int, target: BitVector) -> BitVector:
    """
    Find the ``u`` with ``(u A)`` restricted to columns ``i+1 .. N`` equal to ``target``.

    ``A`` must be ``A(N, i)``, whose columns after the first ``i`` form a unit
    lower-triangular block, so the solution exists and is unique. It is found
    by substitution from the last column back.
    """
    n = A.ncols
    if A.nrows != n - i:
        raise DimensionError(f"A has {A.nrows} rows, expected {n - i} for i={i}")
    if len(target) != n - i:
        raise DimensionError(f"target has length {len(target)}, expected {n - i}")
    u = 0
    acc = 0
    for col in reversed(range(i, n)):
        s = col - i
        row = A.rows[s]
        if not (row >> col) & 1 or row >> (col + 1):
            raise DimensionError("tail block is not unit lower-triangular")
        if (acc >> col) & 1 != target[s]:
            u |= 1 << s
            acc ^= row
    return BitVector(u, n - i)


def rowspace_equal(A: BitMatrix, B: BitMatrix) -> bool:
    """True iff ``A`` and ``B`` span the same row space."""
    if A.ncols != B.ncols:
        raise DimensionError(f"column mismatch: {A.ncols} vs {B.ncols}")
    return echelon(A).rows == echelon(B).rows


def permute_columns(A: BitMatrix, perm: Sequence[int]) -> BitMatrix:
    """Return ``A P``: column ``j`` of the result is column ``perm[j]`` of ``A``."""
    if sorted(perm) != list(range(A.ncols)):
        raise DimensionError(f"{list(perm)} is not a permutation of {A.ncols} columns")
    rows = []
    for row in A.rows:
        new = 0
        for j, src in enumerate(perm):
            new |= ((row >> src) & 1) << j
        rows.append(new)
    return BitMatrix(tuple(rows), A.ncols)
