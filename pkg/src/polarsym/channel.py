"""
Symmetric binary-input discrete memoryless channels with exact probabilities.

A channel is a finite output alphabet, the two transition rows ``W(.|0)`` and
``W(.|1)`` as ``Fraction`` values, and the conjugation ``y -> 1.y``: an
involution on symbol indices that exchanges the roles of the two inputs.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import TYPE_CHECKING, Any, Iterator, Sequence, Union

from .config import DEFAULT_LIMITS, Limits
from .errors import CapExceededError, ChannelError, ChannelValidationError, DimensionError

if TYPE_CHECKING:
    from .gf2 import BitVector

log = logging.getLogger(__name__)

ExactProb = Fraction

ProbLike = Union[Fraction, int, str]


def parse_prob(value: ProbLike) -> Fraction:
    """Read ``"num/den"``, an integer or a ``Fraction`` as an exact rational."""
    if isinstance(value, bool) or isinstance(value, float):
        raise ChannelError(f"{value!r} is not exact; write it as a 'num/den' string")
    try:
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ChannelError(f"cannot read {value!r} as a rational number") from exc


def format_prob(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _unit_prob(value: ProbLike, what: str) -> Fraction:
    prob = parse_prob(value)
    if not 0 <= prob <= 1:
        raise ChannelError(f"{what} must lie in [0, 1], got {format_prob(prob)}")
    return prob


@dataclass(frozen=True, order=True)
class ReceivedVector:
    """
    A received word ``y_1^N`` as symbol indices into a channel alphabet.

    Vectors order lexicographically by their indices, which is the order
    used to pick class representatives.
    """

    syms: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.syms)

    def __len__(self) -> int:
        return len(self.syms)

    def __getitem__(self, j: int) -> int:
        return self.syms[j]

    def __iter__(self) -> Iterator[int]:
        return iter(self.syms)

    @staticmethod
    def from_labels(ch: SymmetricChannel, labels: Sequence[str]) -> ReceivedVector:
        return ReceivedVector(tuple(ch.index(label) for label in labels))

    def labels(self, ch: SymmetricChannel) -> list[str]:
        return [ch.symbols[s] for s in self.syms]

    def concat(self, other: ReceivedVector) -> ReceivedVector:
        return ReceivedVector(self.syms + other.syms)

    def stride(self, start: int, step: int) -> ReceivedVector:
        return ReceivedVector(self.syms[start::step])


@dataclass(frozen=True)
class DRatio:
    """
    The likelihood ratio ``W(1.y|0) : W(y|0)`` kept as a projective pair.

    ``0/x`` and ``x/0`` are the two extremes; ``0/0`` has no direction.
    """

    num: Fraction
    den: Fraction

    def key(self) -> tuple[int, Fraction]:
        if self.num == 0 and self.den == 0:
            raise ChannelError("the D-ratio of a zero-mass symbol is undefined")
        if self.den == 0:
            return (1, Fraction(0))
        return (0, self.num / self.den)


@dataclass(frozen=True)
class AlphabetPartition:
    """
    The split of an alphabet into ``self(Y)`` and ``symm(Y)``.

    ``symm_set`` is stored in pairing order: the conjugate of ``symm_set[t]``
    is ``symm_set[s2 - 1 - t]``. Its first half holds, in increasing index
    order, each symm symbol that has the smaller index of its pair.
    """

    self_set: tuple[int, ...]
    symm_set: tuple[int, ...]

    @property
    def s1(self) -> int:
        return len(self.self_set)

    @property
    def s2(self) -> int:
        return len(self.symm_set)

    @property
    def layout(self) -> tuple[int, ...]:
        """Self block then symm block; the coordinate order of occurrence vectors."""
        return self.self_set + self.symm_set

    @property
    def representatives(self) -> tuple[int, ...]:
        """One symbol per conjugation orbit."""
        return self.self_set + self.symm_set[: self.s2 // 2]

    def pair(self, t: int) -> int:
        return self.s2 - 1 - t

    @staticmethod
    def of(conj: Sequence[int]) -> AlphabetPartition:
        fixed = tuple(y for y, c in enumerate(conj) if c == y)
        lower = [y for y, c in enumerate(conj) if y < c]
        return AlphabetPartition(fixed, tuple(lower) + tuple(conj[y] for y in reversed(lower)))


@dataclass(frozen=True)
class SymmetricChannel:
    """
    A symmetric B-DMC.

    Attributes
    ----------
    symbols : tuple of str
        Display labels of the output symbols.
    w0, w1 : tuple of Fraction
        ``W(y|0)`` and ``W(y|1)`` per symbol.
    conj : tuple of int
        The conjugate ``1.y`` of every symbol, as an index.
    normalized : bool
        Whether the rows must sum to one. Derived channels built from
        likelihood products carry unnormalized weights.
    name : str
        Short description used in reports.
    """

    symbols: tuple[str, ...]
    w0: tuple[Fraction, ...]
    w1: tuple[Fraction, ...]
    conj: tuple[int, ...]
    normalized: bool = True
    name: str = field(default="custom", compare=False)

    def __post_init__(self):
        size = len(self.symbols)
        if size == 0:
            raise ChannelError("a channel needs at least one output symbol")
        if not len(self.w0) == len(self.w1) == len(self.conj) == size:
            raise ChannelError("symbols, w0, w1 and conj must have the same length")
        if len(set(self.symbols)) != size:
            raise ChannelError("symbol labels must be unique")
        for y, c in enumerate(self.conj):
            if not 0 <= c < size:
                raise ChannelError(f"conj of symbol {y} points outside the alphabet")

    @property
    def size(self) -> int:
        return len(self.symbols)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {label: y for y, label in enumerate(self.symbols)}

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ChannelError(f"unknown symbol {label!r}; alphabet is {list(self.symbols)}") from None

    @cached_property
    def partition(self) -> AlphabetPartition:
        return AlphabetPartition.of(self.conj)

    def d_ratio(self, y: int) -> DRatio:
        return DRatio(self.w0[self.conj[y]], self.w0[y])

    def orbit_mass(self, y: int) -> Fraction:
        """``T(y) = W(y|0) + W(1.y|0)``; the mass of the orbit of ``y`` under input 0."""
        return self.w0[y] + self.w0[self.conj[y]]

    def __str__(self) -> str:
        return self.name


def make_bsc(p: ProbLike) -> SymmetricChannel:
    """Binary symmetric channel with crossover probability ``p``."""
    p = _unit_prob(p, "crossover probability")
    return SymmetricChannel(
        symbols=("0", "1"),
        w0=(1 - p, p),
        w1=(p, 1 - p),
        conj=(1, 0),
        name=f"bsc:{format_prob(p)}",
    )


def make_bec(eps: ProbLike) -> SymmetricChannel:
    """Binary erasure channel with erasure probability ``eps``; the erasure is ``e``."""
    eps = _unit_prob(eps, "erasure probability")
    return SymmetricChannel(
        symbols=("0", "e", "1"),
        w0=(1 - eps, eps, Fraction(0)),
        w1=(Fraction(0), eps, 1 - eps),
        conj=(2, 1, 0),
        name=f"bec:{format_prob(eps)}",
    )


def validate(ch: SymmetricChannel) -> list[str]:
    """
    Check every channel invariant and return all violations.

    An empty list means the channel is valid.
    """
    violations = []
    for y, c in enumerate(ch.conj):
        if ch.conj[c] != y:
            violations.append(f"conj not involution at {ch.symbols[y]}")
    for y in range(ch.size):
        if ch.w0[y] < 0 or ch.w1[y] < 0:
            violations.append(f"negative probability at {ch.symbols[y]}")
    for y, c in enumerate(ch.conj):
        if ch.w0[c] != ch.w1[y] or ch.w1[c] != ch.w0[y]:
            violations.append(f"symmetry broken at {ch.symbols[y]}")
    if ch.normalized:
        for x, row in ((0, ch.w0), (1, ch.w1)):
            total = sum(row, Fraction(0))
            if total != 1:
                violations.append(f"W(.|{x}) sums to {format_prob(total)}, not 1")
    if not violations and ch.partition.s2 % 2:
        violations.append("symm(Y) has odd size")
    return violations


def ensure_valid(ch: SymmetricChannel) -> SymmetricChannel:
    violations = validate(ch)
    if violations:
        raise ChannelValidationError(violations)
    return ch


def apply_mask(ch: SymmetricChannel, mask: BitVector, y: ReceivedVector) -> ReceivedVector:
    """Conjugate every position of ``y`` whose mask bit is set."""
    if len(mask) != len(y):
        raise DimensionError(f"mask length {len(mask)} does not match vector length {len(y)}")
    bits = mask.bits
    conj = ch.conj
    return ReceivedVector(
        tuple(conj[s] if (bits >> j) & 1 else s for j, s in enumerate(y.syms))
    )


def is_degenerate(ch: SymmetricChannel) -> bool:
    """
    True for channels whose class counts fall below the generic values.

    That is a noiseless channel, a symm symbol with ``W(y|0) = W(y|1)``,
    or a symbol that never occurs.
    """
    if any(ch.w0[y] + ch.w1[y] == 0 for y in range(ch.size)):
        return True
    if all(ch.w0[y] * ch.w1[y] == 0 for y in range(ch.size)):
        return True
    return any(ch.w0[y] == ch.w1[y] for y in ch.partition.symm_set)


def distinct_d_check(ch: SymmetricChannel) -> bool:
    """
    True iff the D-ratios of ``self(Y)`` and one representative per symm
    pair are pairwise distinct.

    The two members of a pair have reciprocal ratios, so only the first of
    each pair is compared. Degenerate channels always fail.
    """
    if is_degenerate(ch):
        return False
    reps = ch.partition.representatives
    return len({ch.d_ratio(y).key() for y in reps}) == len(reps)


def multiset_channel(ch: SymmetricChannel, m: int, limits: Limits = DEFAULT_LIMITS) -> SymmetricChannel:
    """
    The channel whose symbols are multisets of ``m`` symbols of ``ch``.

    Symbols are occurrence vectors over the partition layout of ``ch``. The
    weight of a multiset is the product of its members' ``W(.|0)`` without
    multinomial factors, so the result is not normalized. Conjugation
    reverses the symm block.

    Parameters
    ----------
    ch : SymmetricChannel
        The base channel.
    m : int
        Multiset size, ``m >= 1``.
    limits : Limits
        The derived alphabet must fit ``limits.max_alphabet``.

    Returns
    -------
    SymmetricChannel
        An unnormalized symmetric channel; ``m = 1`` reproduces ``ch``.
    """
    from math import comb

    from .counting import OccurrenceVector, star, stars_and_bars

    if m < 1:
        raise DimensionError(f"multiset size must be at least 1, got {m}")
    part = ch.partition
    parts = part.s1 + part.s2
    size = comb(m + parts - 1, parts - 1)
    if size > limits.max_alphabet:
        raise CapExceededError("derived alphabet", size, limits.max_alphabet, "use a larger a'")

    vectors = [OccurrenceVector.from_counts(counts, part.s1) for counts in stars_and_bars(parts, m)]
    index = {z: k for k, z in enumerate(vectors)}
    layout = part.layout
    weights = []
    for z in vectors:
        w = Fraction(1)
        for y, count in zip(layout, z.counts):
            if count:
                w *= ch.w0[y] ** count
        weights.append(w)
    conj = tuple(index[star(1, z)] for z in vectors)
    log.debug("multiset channel of %s with m=%d has %d symbols", ch, m, size)
    return SymmetricChannel(
        symbols=tuple(z.label() for z in vectors),
        w0=tuple(weights),
        w1=tuple(weights[c] for c in conj),
        conj=conj,
        normalized=False,
        name=f"{ch.name}^[{m}]",
    )


def channel_to_dict(ch: SymmetricChannel) -> dict[str, Any]:
    return {
        "name": ch.name,
        "symbols": list(ch.symbols),
        "w0": [format_prob(w) for w in ch.w0],
        "w1": [format_prob(w) for w in ch.w1],
        "conj": list(ch.conj),
        "normalized": ch.normalized,
    }


def channel_from_dict(dct: dict[str, Any]) -> SymmetricChannel:
    """
    Build and validate a channel from its dictionary form.

    Loaded channels are always normalized; only ``multiset_channel`` builds
    unnormalized ones.
    """
    try:
        symbols = tuple(str(s) for s in dct["symbols"])
        w0 = tuple(parse_prob(w) for w in dct["w0"])
        w1 = tuple(parse_prob(w) for w in dct["w1"])
        raw_conj = list(dct["conj"])
    except KeyError as exc:
        raise ChannelError(f"channel definition is missing {exc.args[0]!r}") from None
    except TypeError as exc:
        raise ChannelError(f"malformed channel definition: {exc}") from exc

    violations = [
        f"conj entry {c!r} at position {k} is not an integer index"
        for k, c in enumerate(raw_conj)
        if isinstance(c, bool) or not isinstance(c, int)
    ]
    if dct.get("normalized", True) is not True:
        violations.append("channel files must be normalized")
    if violations:
        raise ChannelValidationError(violations)

    ch = SymmetricChannel(symbols, w0, w1, tuple(raw_conj), name=str(dct.get("name", "custom")))
    return ensure_valid(ch)


def parse_channel(text: str) -> SymmetricChannel:
    try:
        dct = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChannelError(f"channel file is not valid JSON: {exc}") from exc
    if not isinstance(dct, dict):
        raise ChannelError("channel file must hold a JSON object")
    return channel_from_dict(dct)


def load_channel(path: Union[str, Path]) -> SymmetricChannel:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ChannelError(f"cannot read channel file {path}: {exc.strerror}") from exc
    ch = parse_channel(text)
    if ch.name == "custom":
        ch = SymmetricChannel(ch.symbols, ch.w0, ch.w1, ch.conj, ch.normalized, name=path.stem)
    log.debug("loaded channel %s from %s", ch, path)
    return ch


def resolve_channel(spec: str) -> SymmetricChannel:
    """Turn ``bsc:<p>``, ``bec:<eps>`` or a file path into a channel."""
    kind, sep, arg = spec.partition(":")
    if sep and kind.lower() == "bsc":
        return make_bsc(arg)
    if sep and kind.lower() == "bec":
        return make_bec(arg)
    return load_channel(spec)
