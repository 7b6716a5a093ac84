"""
Probability equivalence of received vectors.

Two received vectors are equivalent on bit channel ``i`` when their split
probabilities are equal. This module enumerates the classes by brute force
and checks the structural results that predict them: column permutations
that preserve the row space, the row-space orbit, the zero-tail canonical
form of the BSC, the doubling lift and the multiset reduction.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Iterable, Iterator, Optional, Sequence

from .channel import (
    ExactProb,
    ReceivedVector,
    SymmetricChannel,
    apply_mask,
    format_prob,
    is_degenerate,
    multiset_channel,
    parse_prob,
)
from .config import DEFAULT_LIMITS, Limits
from .counting import CountInstance, Exactness, class_count, reduce_instance
from .errors import CapExceededError, ChannelError, DimensionError
from .gf2 import (
    BitVector,
    block_exponent,
    permute_columns,
    polar_tail,
    row_space,
    rowspace_equal,
    solve_tail,
    vec_mul,
)
from .splitprob import coset_scale, coset_sum, split_prob

log = logging.getLogger(__name__)

# below this many vectors a worker pool costs more than it saves
_MIN_PARALLEL_DOMAIN = 1 << 10


class Domain(Enum):
    FULL = "full-alphabet"
    BSC_CANONICAL = "bsc-canonical"


@dataclass(frozen=True)
class EquivalenceClass:
    """
    One class of a brute-force enumeration.

    Attributes
    ----------
    representative : ReceivedVector
        The lexicographically smallest member of the enumerated domain.
    probability : Fraction
        The split probability shared by every member.
    size : int
        Number of members in the enumerated domain.
    """

    representative: ReceivedVector
    probability: ExactProb
    size: int


@dataclass(frozen=True)
class ClassReport:
    """
    The classes of bit channel ``i`` at block length ``n``, sorted by
    probability, largest first.
    """

    n: int
    i: int
    domain: Domain
    classes: tuple[EquivalenceClass, ...]
    degenerate: bool = False
    channel: str = ""

    @property
    def count(self) -> int:
        return len(self.classes)

    @property
    def domain_size(self) -> int:
        return sum(c.size for c in self.classes)


def is_bsc_like(ch: SymmetricChannel) -> bool:
    """Two symbols swapped by conjugation (``S1 = 0``, ``S2 = 2``)."""
    return ch.size == 2 and ch.conj == (1, 0)


def default_domain(ch: SymmetricChannel) -> Domain:
    return Domain.BSC_CANONICAL if is_bsc_like(ch) else Domain.FULL


def domain_size(ch: SymmetricChannel, n: int, i: int, domain: Domain) -> int:
    if domain is Domain.BSC_CANONICAL:
        return 1 << i
    return ch.size ** n


def iter_domain(
    ch: SymmetricChannel,
    n: int,
    i: int,
    domain: Domain,
    start: int = 0,
    stop: Optional[int] = None,
) -> Iterator[ReceivedVector]:
    """
    Yield domain vectors ``start .. stop-1`` in lexicographic order.

    The canonical domain holds the ``2**i`` binary vectors whose positions
    after the first ``i`` are all ``0``.
    """
    size = domain_size(ch, n, i, domain)
    stop = size if stop is None else min(stop, size)
    if domain is Domain.BSC_CANONICAL:
        if not is_bsc_like(ch):
            raise ChannelError(f"the canonical domain needs a BSC-like channel, not {ch}")
        tail = (0,) * (n - i)
        for k in range(start, stop):
            yield ReceivedVector(tuple((k >> (i - 1 - j)) & 1 for j in range(i)) + tail)
        return
    base = ch.size
    for k in range(start, stop):
        digits = [0] * n
        for j in reversed(range(n)):
            k, digits[j] = divmod(k, base)
        yield ReceivedVector(tuple(digits))


ProbCache = dict[ReceivedVector, ExactProb]


def cached_split_prob(
    ch: SymmetricChannel,
    i: int,
    y: ReceivedVector,
    cache: Optional[ProbCache],
    limits: Limits = DEFAULT_LIMITS,
) -> ExactProb:
    """``split_prob`` memoized in ``cache``, which must belong to this channel and ``i``."""
    if cache is None:
        return split_prob(ch, i, y, limits)
    prob = cache.get(y)
    if prob is None:
        prob = cache[y] = split_prob(ch, i, y, limits)
    return prob


def _check_same_length(y: ReceivedVector, v: ReceivedVector):
    if len(y) != len(v):
        raise DimensionError(f"vectors have lengths {len(y)} and {len(v)}")


def prob_equivalent(
    ch: SymmetricChannel,
    i: int,
    y: ReceivedVector,
    v: ReceivedVector,
    limits: Limits = DEFAULT_LIMITS,
) -> bool:
    _check_same_length(y, v)
    if y == v:
        return True
    return split_prob(ch, i, y, limits) == split_prob(ch, i, v, limits)


def bsc_canonicalize(
    ch: SymmetricChannel, i: int, y: ReceivedVector, limits: Limits = DEFAULT_LIMITS
) -> ReceivedVector:
    """
    The equivalent vector whose positions after the first ``i`` are ``0``.

    Solves ``(u A)_tail = y_tail`` and conjugates ``y`` by ``u A``.
    """
    if not is_bsc_like(ch):
        raise ChannelError(f"canonical forms are defined for BSC-like channels, not {ch}")
    n = len(y)
    A = polar_tail(block_exponent(n), i, limits)
    target = BitVector.from_list([1 if s else 0 for s in y.syms[i:]])
    u = solve_tail(A, i, target)
    return apply_mask(ch, vec_mul(u, A), y)


def symmetry_orbit(
    ch: SymmetricChannel, i: int, y: ReceivedVector, limits: Limits = DEFAULT_LIMITS
) -> frozenset[ReceivedVector]:
    """``{(u A).y : u}``; every member is equivalent to ``y``."""
    A = polar_tail(block_exponent(len(y)), i, limits)
    return frozenset(apply_mask(ch, mask, y) for mask in row_space(A, limits=limits))


def permute(y: ReceivedVector, perm: Sequence[int]) -> ReceivedVector:
    """``y P``: position ``j`` of the result is position ``perm[j]`` of ``y``."""
    if sorted(perm) != list(range(len(y))):
        raise DimensionError(f"{list(perm)} is not a permutation of {len(y)} positions")
    return ReceivedVector(tuple(y.syms[src] for src in perm))


def _classify_chunk(job: tuple) -> dict[int, list]:
    ch, n, i, domain, start, stop, limits = job
    groups: dict[int, list] = {}
    for y in iter_domain(ch, n, i, domain, start, stop):
        key = coset_sum(ch, i, y, limits=limits)
        entry = groups.get(key)
        if entry is None:
            groups[key] = [1, y]
        else:
            entry[0] += 1
            if y < entry[1]:
                entry[1] = y
    return groups


def enumerate_classes(
    ch: SymmetricChannel,
    n_exp: int,
    i: int,
    domain: Optional[Domain] = None,
    workers: int = 1,
    limits: Limits = DEFAULT_LIMITS,
) -> ClassReport:
    """
    Group a domain of received vectors by exact split probability.

    Parameters
    ----------
    ch : SymmetricChannel
        The channel.
    n_exp : int
        Block length exponent, ``N = 2**n_exp``.
    i : int
        Bit index, ``0 <= i <= N``.
    domain : Domain, optional
        Defaults to the canonical domain for BSC-like channels and the full
        alphabet power otherwise.
    workers : int
        Number of processes. The report does not depend on it.
    limits : Limits
        Caps on the domain and on the row space of ``A(N, i)``.

    Returns
    -------
    ClassReport
    """
    n = 1 << n_exp
    if not 0 <= i <= n:
        raise DimensionError(f"bit index {i} out of range 0..{n}")
    if domain is None:
        domain = default_domain(ch)
    size = domain_size(ch, n, i, domain)
    if size > limits.max_domain:
        raise CapExceededError("domain", size, limits.max_domain, "lower N or use --method formula")
    if (1 << (n - i)) > limits.max_row_space:
        raise CapExceededError("row space", 1 << (n - i), limits.max_row_space, "raise i or lower N")

    if workers > 1 and size >= _MIN_PARALLEL_DOMAIN:
        step = -(-size // (workers * 4))
        jobs = [(ch, n, i, domain, s, min(s + step, size), limits) for s in range(0, size, step)]
        log.debug("classifying %d vectors in %d chunks on %d workers", size, len(jobs), workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_classify_chunk, jobs))
    else:
        parts = [_classify_chunk((ch, n, i, domain, 0, size, limits))]

    merged: dict[int, list] = {}
    for part in parts:
        for key, (count, rep) in part.items():
            entry = merged.get(key)
            if entry is None:
                merged[key] = [count, rep]
            else:
                entry[0] += count
                entry[1] = min(entry[1], rep)

    scale = coset_scale(ch, n)
    classes = tuple(
        EquivalenceClass(rep, Fraction(key, scale), count)
        for key, (count, rep) in sorted(merged.items(), key=lambda kv: kv[0], reverse=True)
    )
    log.debug("N=%d i=%d: %d classes over %d vectors", n, i, len(classes), size)
    return ClassReport(n, i, domain, classes, is_degenerate(ch), ch.name)


@dataclass(frozen=True)
class PermutationVerdict:
    """
    Outcome of a column-permutation check.

    When the permutation does not preserve the row space no equivalence
    is claimed and ``checked`` is zero.
    """

    perm: tuple[int, ...]
    premise_holds: bool
    checked: int = 0
    equivalences_verified: bool = False
    counterexample: Optional[ReceivedVector] = None

    @property
    def passed(self) -> bool:
        return not self.premise_holds or self.equivalences_verified


def verify_permutation_theorem(
    ch: SymmetricChannel,
    i: int,
    perm: Sequence[int],
    vectors: Optional[Iterable[ReceivedVector]] = None,
    cache: Optional[ProbCache] = None,
    limits: Limits = DEFAULT_LIMITS,
) -> PermutationVerdict:
    """
    If ``row(A) = row(A P)``, check that ``y`` and ``y P`` are equivalent.

    ``vectors`` defaults to the full alphabet power of length ``len(perm)``.
    """
    n = len(perm)
    A = polar_tail(block_exponent(n), i, limits)
    perm = tuple(perm)
    if not rowspace_equal(A, permute_columns(A, perm)):
        return PermutationVerdict(perm, premise_holds=False)
    if vectors is None:
        size = domain_size(ch, n, i, Domain.FULL)
        if size > limits.max_domain:
            raise CapExceededError("domain", size, limits.max_domain, "pass a sample of vectors")
        vectors = iter_domain(ch, n, i, Domain.FULL)
    checked = 0
    for y in vectors:
        checked += 1
        v = permute(y, perm)
        if cached_split_prob(ch, i, y, cache, limits) != cached_split_prob(ch, i, v, cache, limits):
            return PermutationVerdict(perm, True, checked, False, y)
    return PermutationVerdict(perm, True, checked, True)


@dataclass(frozen=True)
class DoublingVerdict:
    """
    Outcome of lifting the classes at ``N`` to ``2N`` with one companion symbol.

    ``counterexample`` is a pair equivalent at ``N`` whose lifts differ.
    """

    companion: int
    n: int
    i: int
    pairs_checked: int
    counterexample: Optional[tuple[ReceivedVector, ReceivedVector]] = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None


def verify_doubling(
    ch: SymmetricChannel,
    n_exp: int,
    i: int,
    companion: int,
    vectors: Optional[Iterable[ReceivedVector]] = None,
    cache: Optional[ProbCache] = None,
    limits: Limits = DEFAULT_LIMITS,
) -> DoublingVerdict:
    """
    Check that vectors equivalent at ``(N, i)`` stay equivalent at ``(2N, i)``
    after appending ``N`` copies of ``companion``.

    ``vectors`` defaults to the canonical domain for BSC-like channels and
    the full alphabet power otherwise. Equivalence is transitive, so every
    member of a class is compared with the first one.
    """
    n = 1 << n_exp
    if not 0 <= companion < ch.size:
        raise DimensionError(f"companion symbol {companion} is not in the alphabet")
    if not 0 <= i <= n:
        raise DimensionError(f"bit index {i} out of range 0..{n}")
    if vectors is None:
        domain = default_domain(ch)
        size = domain_size(ch, n, i, domain)
        if size > limits.max_domain:
            raise CapExceededError("domain", size, limits.max_domain, "pass a sample of vectors")
        vectors = iter_domain(ch, n, i, domain)

    groups: dict[ExactProb, list[ReceivedVector]] = {}
    for y in vectors:
        groups.setdefault(cached_split_prob(ch, i, y, cache, limits), []).append(y)

    pad = ReceivedVector((companion,) * n)
    checked = 0
    for members in groups.values():
        if len(members) < 2:
            continue
        first = members[0]
        lifted = split_prob(ch, i, first.concat(pad), limits)
        for other in members[1:]:
            checked += 1
            if split_prob(ch, i, other.concat(pad), limits) != lifted:
                log.info(
                    "doubling with companion %s fails at N=%d i=%d", ch.symbols[companion], n, i
                )
                return DoublingVerdict(companion, n, i, checked, (first, other))
    return DoublingVerdict(companion, n, i, checked)


@dataclass(frozen=True)
class BlocklengthVerdict:
    i: int
    counts: dict[int, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return len(set(self.counts.values())) <= 1


def verify_blocklength_invariance(
    ch: SymmetricChannel,
    i: int,
    n_exp_small: int,
    n_exp_large: int,
    workers: int = 1,
    limits: Limits = DEFAULT_LIMITS,
) -> BlocklengthVerdict:
    """Compare the class counts of bit channel ``i`` at two block lengths of a BSC-like channel."""
    if not is_bsc_like(ch):
        raise ChannelError(f"block-length invariance is checked on BSC-like channels, not {ch}")
    counts = {}
    for n_exp in (n_exp_small, n_exp_large):
        report = enumerate_classes(ch, n_exp, i, workers=workers, limits=limits)
        counts[report.n] = report.count
    return BlocklengthVerdict(i, counts)


@dataclass(frozen=True)
class ReductionVerdict:
    """Brute-force class counts before and after the multiset reduction."""

    original: CountInstance
    reduced: CountInstance
    original_count: int
    reduced_count: int

    @property
    def passed(self) -> bool:
        return self.original_count == self.reduced_count


def verify_reduction(
    ch: SymmetricChannel,
    n_exp: int,
    i: int,
    a_prime: int,
    workers: int = 1,
    original_count: Optional[int] = None,
    limits: Limits = DEFAULT_LIMITS,
) -> ReductionVerdict:
    """
    Count the classes of ``(N, i)`` directly and over the reduced instance.

    The reduced side enumerates every vector of length ``a'`` over the
    multiset alphabet of ``N/a'`` symbols, with product weights and the
    star action, on bit channel ``i' = i - (N - a')``.
    A known count for the original side can be passed as ``original_count``.
    """
    n = 1 << n_exp
    inst = CountInstance.for_channel(ch, n, i)
    reduced = reduce_instance(inst, a_prime)
    derived = multiset_channel(ch, n // a_prime, limits)
    if original_count is None:
        original_count = enumerate_classes(ch, n_exp, i, workers=workers, limits=limits).count
    reduced_count = enumerate_classes(
        derived, block_exponent(a_prime), reduced.i, Domain.FULL, workers, limits
    ).count
    log.debug("reduction %s -> %s: %d vs %d", inst, reduced, original_count, reduced_count)
    return ReductionVerdict(inst, reduced, original_count, reduced_count)


@dataclass(frozen=True)
class BoundVerdict:
    """Brute-force count at ``i = 0`` against the binomial bound."""

    n: int
    brute: int
    bound: int
    exactness: Exactness

    @property
    def passed(self) -> bool:
        if self.brute > self.bound:
            return False
        return self.exactness is not Exactness.EXACT or self.brute == self.bound


def verify_bound_i0(
    ch: SymmetricChannel, n_exp: int, workers: int = 1, limits: Limits = DEFAULT_LIMITS
) -> BoundVerdict:
    n = 1 << n_exp
    predicted = class_count(ch, CountInstance.for_channel(ch, n, 0), limits=limits)
    brute = enumerate_classes(ch, n_exp, 0, workers=workers, limits=limits).count
    return BoundVerdict(n, brute, predicted.value, predicted.exactness)


def report_to_dict(report: ClassReport, ch: SymmetricChannel) -> dict[str, Any]:
    return {
        "channel": report.channel,
        "n": report.n,
        "i": report.i,
        "domain": report.domain.value,
        "degenerate": report.degenerate,
        "count": report.count,
        "classes": [
            {
                "probability": format_prob(c.probability),
                "size": c.size,
                "representative": c.representative.labels(ch),
            }
            for c in report.classes
        ],
    }


def report_from_dict(dct: dict[str, Any], ch: SymmetricChannel) -> ClassReport:
    classes = tuple(
        EquivalenceClass(
            ReceivedVector.from_labels(ch, c["representative"]),
            parse_prob(c["probability"]),
            int(c["size"]),
        )
        for c in dct["classes"]
    )
    if len(classes) != dct.get("count", len(classes)):
        raise DimensionError("class count does not match the listed classes")
    return ClassReport(
        int(dct["n"]),
        int(dct["i"]),
        Domain(dct["domain"]),
        classes,
        bool(dct.get("degenerate", False)),
        str(dct.get("channel", "")),
    )
