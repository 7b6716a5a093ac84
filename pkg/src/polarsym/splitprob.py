"""
Exact split-channel transition probabilities.

``W_N^(i)(y) = 2^-(N-1) * sum over v in row(A(N, i)) of W^N(v.y | 0)``,
where ``v.y`` conjugates the positions of ``y`` selected by ``v``. The sum
is carried out over integers: every ``W(y|0)`` is scaled by the common
denominator of the channel, and the row space is walked in Gray-code order
so each step changes only the positions of one row.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Optional, Sequence

from .channel import ExactProb, ReceivedVector, SymmetricChannel, apply_mask
from .config import DEFAULT_LIMITS, Limits
from .errors import CapExceededError, DimensionError
from .gf2 import BitVector, block_exponent, gray_walk, iter_bits, kron_power, polar_tail, vec_mul

log = logging.getLogger(__name__)

__all__ = [
    "ExactProb",
    "ReceivedVector",
    "w_n_vector",
    "w_combined",
    "split_prob",
    "split_prob_general",
    "coset_sum",
    "coset_scale",
    "probability_map",
]


def w_n_vector(ch: SymmetricChannel, y: ReceivedVector, x: BitVector) -> ExactProb:
    """``W^N(y | x)``, the memoryless product over positions."""
    if len(x) != len(y):
        raise DimensionError(f"input length {len(x)} does not match output length {len(y)}")
    value = Fraction(1)
    for j, sym in enumerate(y):
        value *= ch.w1[sym] if x[j] else ch.w0[sym]
    return value


def w_combined(ch: SymmetricChannel, y: ReceivedVector, u: BitVector) -> ExactProb:
    """``W_N(y | u) = W^N(y | u G_N)``."""
    if len(u) != len(y):
        raise DimensionError(f"input length {len(u)} does not match output length {len(y)}")
    G = kron_power(block_exponent(len(y)))
    return w_n_vector(ch, y, vec_mul(u, G))


@lru_cache(maxsize=128)
def _scaled_weights(ch: SymmetricChannel) -> tuple[tuple[int, ...], int]:
    den = lcm(*(w.denominator for w in ch.w0))
    return tuple(int(w * den) for w in ch.w0), den


@lru_cache(maxsize=64)
def _row_positions(rows: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(iter_bits(row)) for row in rows)


def _walk_sum(
    weights: Sequence[int],
    conj: Sequence[int],
    syms: Sequence[int],
    rows: tuple[int, ...],
    start: int,
    stop: Optional[int],
) -> int:
    positions = _row_positions(rows)
    current: list[int] = []
    zeros = 0
    prod = 1
    total = 0
    for mask, flipped in gray_walk(rows, start, stop):
        if flipped < 0:
            current = [conj[s] if (mask >> j) & 1 else s for j, s in enumerate(syms)]
            for s in current:
                if weights[s]:
                    prod *= weights[s]
                else:
                    zeros += 1
        else:
            for j in positions[flipped]:
                old = current[j]
                new = conj[old]
                current[j] = new
                f_old, f_new = weights[old], weights[new]
                if f_old == f_new:
                    continue
                if f_old:
                    prod //= f_old
                else:
                    zeros -= 1
                if f_new:
                    prod *= f_new
                else:
                    zeros += 1
        if not zeros:
            total += prod
    return total


def coset_scale(ch: SymmetricChannel, n: int) -> int:
    """The denominator that turns a ``coset_sum`` at block length ``n`` into a probability."""
    _, den = _scaled_weights(ch)
    return den ** n << (n - 1)


def coset_sum(
    ch: SymmetricChannel,
    i: int,
    y: ReceivedVector,
    start: int = 0,
    stop: Optional[int] = None,
    limits: Limits = DEFAULT_LIMITS,
) -> int:
    """
    Integer partial sum of ``W^N(v.y | 0)`` over Gray-code steps ``[start, stop)``.

    Every term is scaled by ``den**N`` with ``den`` the common denominator of
    ``W(.|0)``. Partial sums over disjoint ranges add up to the full sum, so
    the range can be split between workers.
    """
    n_exp = block_exponent(len(y))
    A = polar_tail(n_exp, i, limits)
    size = 1 << A.nrows
    if size > limits.max_row_space:
        raise CapExceededError("row space", size, limits.max_row_space, "lower N or raise i")
    weights, _ = _scaled_weights(ch)
    return _walk_sum(weights, ch.conj, y.syms, A.rows, start, stop)


def split_prob(
    ch: SymmetricChannel, i: int, y: ReceivedVector, limits: Limits = DEFAULT_LIMITS
) -> ExactProb:
    """
    ``W_N^(i)(y, 0 | 0)``, exactly.

    Parameters
    ----------
    ch : SymmetricChannel
        The channel.
    i : int
        Bit index, ``0 <= i <= N``. At ``i = N`` the row space is ``{0}``.
    y : ReceivedVector
        The received vector; its length ``N`` must be a power of two.
    limits : Limits
        ``2**(N - i)`` must fit ``limits.max_row_space``.

    Returns
    -------
    Fraction
    """
    return Fraction(coset_sum(ch, i, y, limits=limits), coset_scale(ch, len(y)))


def split_prob_general(
    ch: SymmetricChannel,
    i: int,
    y: ReceivedVector,
    u_prev: BitVector,
    u_i: int = 0,
    limits: Limits = DEFAULT_LIMITS,
) -> ExactProb:
    """
    ``W_N^(i)(y, u_1^(i-1) | u_i)`` for any decided prefix.

    With ``a = (u_prev, u_i, 0, ..., 0)`` the value equals
    ``split_prob(ch, i, (a G_N).y)``.
    """
    n = len(y)
    if not 1 <= i <= n:
        raise DimensionError(f"bit index {i} out of range 1..{n}")
    if len(u_prev) != i - 1:
        raise DimensionError(f"u_prev has length {len(u_prev)}, expected {i - 1}")
    if u_i not in (0, 1):
        raise DimensionError(f"u_i must be a bit, got {u_i!r}")
    a = BitVector(u_prev.bits | (u_i << (i - 1)), n)
    x = vec_mul(a, kron_power(block_exponent(n), limits))
    return split_prob(ch, i, apply_mask(ch, x, y), limits)


def probability_map(
    ch: SymmetricChannel,
    i: int,
    vectors: Iterable[ReceivedVector],
    limits: Limits = DEFAULT_LIMITS,
) -> dict[ReceivedVector, ExactProb]:
    """Evaluate ``split_prob`` once per distinct vector."""
    probs: dict[ReceivedVector, ExactProb] = {}
    for y in vectors:
        if y not in probs:
            probs[y] = split_prob(ch, i, y, limits)
    log.debug("evaluated %d split probabilities at i=%d", len(probs), i)
    return probs
