"""
Closed-form counts of probability-equivalence classes.

The reduction maps an instance ``(N, i, S1, S2)`` to a shorter block
``(a', i', S3, S4)`` over the alphabet of multisets of ``N/a'`` symbols.
When the reduced bit index is zero the count has a binomial closed form,
which is exact as long as the reduced channel separates multiset products.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb, gcd
from typing import TYPE_CHECKING, Iterator, Union

from .config import DEFAULT_LIMITS, Limits
from .errors import ChannelError, DimensionError, ReductionError
from .gf2 import block_exponent

if TYPE_CHECKING:
    from .channel import AlphabetPartition, ReceivedVector, SymmetricChannel

log = logging.getLogger(__name__)

# modulus for the exponent-matrix rank test
_RANK_PRIME = (1 << 61) - 1


def stars_and_bars(parts: int, total: int) -> Iterator[tuple[int, ...]]:
    """
    Yield every tuple of ``parts`` nonnegative integers summing to ``total``.

    Tuples come in lexicographic order.
    """
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for value in range(total + 1):
        for rest in stars_and_bars(parts - 1, total - value):
            yield (value,) + rest


@dataclass(frozen=True)
class OccurrenceVector:
    """
    Symbol counts of a received vector over the partition layout.

    Attributes
    ----------
    q : tuple of int
        Counts of the self symbols.
    e : tuple of int
        Counts of the symm symbols in pairing order.
    """

    q: tuple[int, ...]
    e: tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.q + self.e):
            raise DimensionError("occurrence counts must be nonnegative")

    @property
    def total(self) -> int:
        return sum(self.q) + sum(self.e)

    @property
    def counts(self) -> tuple[int, ...]:
        return self.q + self.e

    @staticmethod
    def from_counts(counts: tuple[int, ...], s1: int) -> OccurrenceVector:
        return OccurrenceVector(tuple(counts[:s1]), tuple(counts[s1:]))

    def star(self, bit: int) -> OccurrenceVector:
        """``0*z = z``; ``1*z`` reverses the symm block."""
        if bit not in (0, 1):
            raise DimensionError(f"star takes a bit, got {bit!r}")
        if not bit:
            return self
        return OccurrenceVector(self.q, self.e[::-1])

    def is_self(self) -> bool:
        return self.e == self.e[::-1]

    def label(self) -> str:
        return "[q={};e={}]".format(",".join(map(str, self.q)), ",".join(map(str, self.e)))


def star(bit: int, z: OccurrenceVector) -> OccurrenceVector:
    return z.star(bit)


def yprime(partition: AlphabetPartition, y: ReceivedVector) -> OccurrenceVector:
    """Count the symbols of ``y``: self block first, symm block in pairing order."""
    slot = {sym: k for k, sym in enumerate(partition.layout)}
    counts = [0] * len(slot)
    for sym in y:
        try:
            counts[slot[sym]] += 1
        except KeyError:
            raise DimensionError(f"symbol index {sym} is not in the partition") from None
    return OccurrenceVector.from_counts(tuple(counts), partition.s1)


def z_map(partition: AlphabetPartition, a_prime: int, y: ReceivedVector) -> list[OccurrenceVector]:
    """Occurrence vectors of the ``a'`` strides ``y_j, y_{j+a'}, ...`` of ``y``."""
    if a_prime < 1 or len(y) % a_prime:
        raise DimensionError(f"stride {a_prime} does not divide length {len(y)}")
    return [yprime(partition, y.stride(j, a_prime)) for j in range(a_prime)]


def _check_partition_sizes(s1: int, s2: int):
    if s1 < 0 or s2 < 0:
        raise ReductionError("partition sizes must be nonnegative")
    if s2 % 2:
        raise ReductionError(f"S2 must be even, got {s2}")


def count_yprime(s1: int, s2: int, n: int) -> int:
    """Number of occurrence vectors of total ``n`` over ``s1 + s2`` symbols."""
    if s1 + s2 < 1:
        raise ReductionError("the alphabet must have at least one symbol")
    if n < 0:
        raise ReductionError("the total must be nonnegative")
    return comb(n + s1 + s2 - 1, s1 + s2 - 1)


def count_self(s1: int, s2: int, n: int) -> int:
    """
    Number of self (``1*z = z``) occurrence vectors of total ``n``.

    A self vector has a palindromic symm block, so it is fixed by the first
    ``s2/2`` symm counts ``r_t`` (total ``2 sum r_t``) plus the self counts.
    """
    _check_partition_sizes(s1, s2)
    if s1 + s2 < 1:
        raise ReductionError("the alphabet must have at least one symbol")
    if n < 0:
        raise ReductionError("the total must be nonnegative")
    if s2 == 0:
        return comb(n + s1 - 1, s1 - 1)
    half = s2 // 2
    if s1 == 0:
        if n % 2:
            return 0
        return comb(n // 2 + half - 1, half - 1)
    return sum(
        comb(r + half - 1, half - 1) * comb(n - 2 * r + s1 - 1, s1 - 1)
        for r in range(n // 2 + 1)
    )


def count_symm(s1: int, s2: int, n: int) -> int:
    return count_yprime(s1, s2, n) - count_self(s1, s2, n)


@dataclass(frozen=True)
class CountInstance:
    """
    The arguments of ``N_C(N, i, S1, S2)``.

    Attributes
    ----------
    n : int
        Block length, a power of two.
    i : int
        Bit index, ``0 <= i <= n``.
    s1, s2 : int
        Sizes of ``self(Y)`` and ``symm(Y)``; ``s2`` is even.
    """

    n: int
    i: int
    s1: int
    s2: int

    def __post_init__(self):
        block_exponent(self.n)
        if not 0 <= self.i <= self.n:
            raise DimensionError(f"bit index {self.i} out of range 0..{self.n}")
        _check_partition_sizes(self.s1, self.s2)
        if self.s1 + self.s2 < 1:
            raise ReductionError("the alphabet must have at least one symbol")

    @staticmethod
    def for_channel(ch: SymmetricChannel, n: int, i: int) -> CountInstance:
        return CountInstance(n, i, ch.partition.s1, ch.partition.s2)


class Exactness(Enum):
    EXACT = "exact"
    UPPER_BOUND = "upper-bound"


class APrimePolicy(Enum):
    AUTO = "auto"
    SQRT = "sqrt"


@dataclass(frozen=True)
class CountResult:
    """
    A predicted class count.

    Attributes
    ----------
    value : int
        The count, or an upper bound on it.
    exactness : Exactness
        Whether ``value`` is proven equal to the true count.
    a_prime : int
        The reduced block length that was used.
    reduced : CountInstance
        The instance after reduction.
    """

    value: int
    exactness: Exactness
    a_prime: int
    reduced: CountInstance

    @property
    def exact(self) -> bool:
        return self.exactness is Exactness.EXACT


def valid_a_primes(inst: CountInstance) -> list[int]:
    """Powers of two ``a'`` with ``max(N - i, 1) <= a' <= N``."""
    low = max(inst.n - inst.i, 1)
    return [1 << k for k in range(block_exponent(inst.n) + 1) if (1 << k) >= low]


def reduce_instance(inst: CountInstance, a_prime: int) -> CountInstance:
    """Map ``(N, i, S1, S2)`` to ``(a', i - (N - a'), S3, S4)`` over multisets of ``N/a'`` symbols."""
    if a_prime not in valid_a_primes(inst):
        raise ReductionError(
            f"a'={a_prime} must be a power of two between {max(inst.n - inst.i, 1)} and {inst.n}"
        )
    m = inst.n // a_prime
    return CountInstance(
        a_prime,
        inst.i - (inst.n - a_prime),
        count_self(inst.s1, inst.s2, m),
        count_symm(inst.s1, inst.s2, m),
    )


def upper_bound_i0(n: int, s1: int, s2: int) -> int:
    """Multisets of ``n`` conjugation-orbit representatives: ``C(n + S2/2 + S1 - 1, S2/2 + S1 - 1)``."""
    _check_partition_sizes(s1, s2)
    k = s1 + s2 // 2
    if k < 1:
        raise ReductionError("the alphabet must have at least one symbol")
    return comb(n + k - 1, k - 1)


def tail_bound(inst: CountInstance) -> int:
    """
    ``(S1+S2)^i (S1+S2/2)^(N-i)``.

    Masks from the row space can move every one of the last ``N - i``
    positions onto an orbit representative, so only the first ``i``
    positions range over the whole alphabet.
    """
    return (inst.s1 + inst.s2) ** inst.i * (inst.s1 + inst.s2 // 2) ** (inst.n - inst.i)


def naive_bound(ch: SymmetricChannel, i: int) -> int:
    """``|Y|^i``; ``2^i`` on the BSC."""
    return ch.size ** i


def choose_a_prime(inst: CountInstance, policy: Union[APrimePolicy, int] = APrimePolicy.AUTO) -> int:
    candidates = valid_a_primes(inst)
    if isinstance(policy, int) and not isinstance(policy, bool):
        if policy not in candidates:
            raise ReductionError(f"a'={policy} is not valid; choose one of {candidates}")
        return policy
    if policy is APrimePolicy.SQRT:
        half = 1 << (block_exponent(inst.n) // 2)
        return half if half in candidates else candidates[0]
    direct = inst.n - inst.i
    if direct in candidates:
        return direct
    return min(candidates, key=lambda a: (tail_bound(reduce_instance(inst, a)), a))


def _coprime_base(values: list[int]) -> list[int]:
    base: list[int] = []
    work = [v for v in values if v > 1]
    while work:
        x = work.pop()
        for idx, b in enumerate(base):
            g = gcd(x, b)
            if g > 1:
                base.pop(idx)
                work.extend(v for v in (g, x // g, b // g) if v > 1)
                break
        else:
            base.append(x)
    return sorted(base)


def _valuation(x: int, b: int) -> int:
    k = 0
    while x % b == 0:
        x //= b
        k += 1
    return k


def _rank_mod_prime(rows: list[list[int]]) -> int:
    mat = [[v % _RANK_PRIME for v in row] for row in rows]
    ncols = len(mat[0]) if mat else 0
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = pow(mat[rank][col], _RANK_PRIME - 2, _RANK_PRIME)
        for r in range(len(mat)):
            if r != rank and mat[r][col]:
                f = mat[r][col] * inv % _RANK_PRIME
                mat[r] = [(a - f * b) % _RANK_PRIME for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def _independent(ratios: list[Fraction]) -> bool:
    base = _coprime_base([v for r in ratios for v in (r.numerator, r.denominator)])
    rows = [
        [_valuation(r.numerator, b) - _valuation(r.denominator, b) for b in base]
        for r in ratios
    ]
    return bool(base) and _rank_mod_prime(rows) == len(ratios)


def products_separated(ch: SymmetricChannel, length: int, limits: Limits = DEFAULT_LIMITS) -> bool:
    """
    True iff distinct multisets of ``length`` orbit representatives have
    distinct products of orbit masses ``T(y) = W(y|0) + W(1.y|0)``.

    The ratios ``T_j / T_0`` are tested for multiplicative independence
    first; that proves separation for every length. Otherwise the products
    are enumerated when there are at most ``limits.max_separation_terms``
    multisets, and the answer is ``False`` beyond that.
    """
    from itertools import combinations_with_replacement

    reps = ch.partition.representatives
    masses = [ch.orbit_mass(y) for y in reps]
    k = len(masses)
    if k <= 1 or length == 0:
        return True
    if all(masses) and _independent([t / masses[0] for t in masses[1:]]):
        return True
    terms = comb(length + k - 1, k - 1)
    if terms > limits.max_separation_terms:
        log.debug("separation of %s undecided: %d multisets over the cap", ch, terms)
        return False
    seen = set()
    for combo in combinations_with_replacement(range(k), length):
        value = Fraction(1)
        for j in combo:
            value *= masses[j]
        if value in seen:
            return False
        seen.add(value)
    return True


def class_count(
    ch: SymmetricChannel,
    inst: CountInstance,
    a_prime_policy: Union[APrimePolicy, int] = APrimePolicy.AUTO,
    limits: Limits = DEFAULT_LIMITS,
) -> CountResult:
    """
    Predict the number of equivalence classes on bit channel ``inst.i``.

    Parameters
    ----------
    ch : SymmetricChannel
        The channel; its partition sizes must match ``inst``.
    inst : CountInstance
        The instance to count.
    a_prime_policy : APrimePolicy or int
        How to pick the reduced block length; an integer forces it.
    limits : Limits
        Caps for the derived alphabet and the separation test.

    Returns
    -------
    CountResult
        The binomial closed form when the reduction reaches ``i' = 0``,
        exact if the reduced channel passes the D-ratio and separation
        checks. Otherwise the tail bound of the reduced instance.
    """
    from .channel import distinct_d_check, multiset_channel

    if (ch.partition.s1, ch.partition.s2) != (inst.s1, inst.s2):
        raise ChannelError(
            f"channel has S1={ch.partition.s1}, S2={ch.partition.s2}; "
            f"instance has S1={inst.s1}, S2={inst.s2}"
        )
    a_prime = choose_a_prime(inst, a_prime_policy)
    reduced = reduce_instance(inst, a_prime)
    log.debug("reduced %s with a'=%d to %s", inst, a_prime, reduced)
    if reduced.i > 0:
        return CountResult(tail_bound(reduced), Exactness.UPPER_BOUND, a_prime, reduced)
    value = upper_bound_i0(reduced.n, reduced.s1, reduced.s2)
    derived = multiset_channel(ch, inst.n // a_prime, limits)
    exact = distinct_d_check(derived) and products_separated(derived, reduced.n, limits)
    exactness = Exactness.EXACT if exact else Exactness.UPPER_BOUND
    return CountResult(value, exactness, a_prime, reduced)


def bsc_class_count(n_exp: int, i: int) -> int:
    """
    ``C(a + N/2a, N/2a)`` with ``a = N - i``: the BSC count when ``a`` is a
    power of two and ``N/2a`` is an integer.
    """
    n = 1 << n_exp
    a = n - i
    if a < 1 or a & (a - 1):
        raise ReductionError(f"N - i = {a} is not a power of two; use class_count")
    if n % (2 * a):
        raise ReductionError(f"N/(2a) = {n}/{2 * a} is not an integer; use class_count")
    b = n // (2 * a)
    return comb(a + b, b)
