from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given
import hypothesis.strategies as st

from polarsym.channel import ReceivedVector, SymmetricChannel, make_bec, make_bsc, multiset_channel
from polarsym.config import Limits
from polarsym.counting import (
    APrimePolicy,
    CountInstance,
    Exactness,
    OccurrenceVector,
    bsc_class_count,
    choose_a_prime,
    class_count,
    count_self,
    count_symm,
    count_yprime,
    naive_bound,
    products_separated,
    reduce_instance,
    star,
    stars_and_bars,
    tail_bound,
    upper_bound_i0,
    valid_a_primes,
    yprime,
    z_map,
)
from polarsym.equivalence import enumerate_classes
from polarsym.errors import ChannelError, DimensionError, ReductionError


def ladder_channel():
    # three fixed symbols whose masses double each step
    return SymmetricChannel(
        ("a", "b", "c"), (F(1, 7), F(2, 7), F(4, 7)), (F(1, 7), F(2, 7), F(4, 7)), (0, 1, 2)
    )


def test_stars_and_bars_order():
    assert list(stars_and_bars(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert list(stars_and_bars(0, 0)) == [()]
    assert list(stars_and_bars(0, 1)) == []


@pytest.mark.parametrize("s1", range(4))
@pytest.mark.parametrize("s2", [0, 2, 4])
def test_counts_match_enumeration(s1, s2):
    if s1 + s2 == 0:
        pytest.skip("empty alphabet")
    half = s2 // 2
    for n in range(13):
        vectors = list(stars_and_bars(s1 + s2, n))
        assert count_yprime(s1, s2, n) == len(vectors)
        selves = [v for v in vectors if v[s1:] == v[s1:][::-1]]
        assert count_self(s1, s2, n) == len(selves)
        assert count_symm(s1, s2, n) == len(vectors) - len(selves)
        if s2:
            assert all(v[s1 : s1 + half] == v[s1 + half :][::-1] for v in selves)


def test_count_edge_cases():
    assert count_yprime(1, 2, 2) == 6
    assert count_self(1, 2, 2) == 2
    assert count_self(0, 2, 4) == 1
    assert count_self(0, 2, 5) == 0
    assert count_symm(0, 2, 6) == 6
    with pytest.raises(ReductionError):
        count_self(0, 3, 2)


def test_occurrence_vector():
    z = OccurrenceVector((1,), (2, 0))
    assert z.star(1) == OccurrenceVector((1,), (0, 2))
    assert z.star(0) is z
    assert not z.is_self()
    assert OccurrenceVector((), (1, 1)).is_self()
    assert z.total == 3
    assert OccurrenceVector((), (1, 1)).label() == "[q=;e=1,1]"
    with pytest.raises(DimensionError):
        OccurrenceVector((-1,), ())
    with pytest.raises(DimensionError):
        z.star(2)


def test_star_reverses_the_symm_block():
    z = OccurrenceVector((2,), (3, 1))
    assert star(1, z) == OccurrenceVector((2,), (1, 3))
    assert star(0, z) == z
    assert star(1, star(1, z)) == z


def test_yprime_and_z_map(bsc, bec):
    y = ReceivedVector((0, 1, 2, 2))
    assert yprime(bec.partition, y) == OccurrenceVector((1,), (1, 2))
    z = z_map(bsc.partition, 2, ReceivedVector((0, 1, 1, 1)))
    assert z == [OccurrenceVector((), (1, 1)), OccurrenceVector((), (0, 2))]
    with pytest.raises(DimensionError):
        z_map(bsc.partition, 3, ReceivedVector((0, 1, 1, 1)))


def test_count_instance_checks():
    with pytest.raises(DimensionError):
        CountInstance(6, 0, 0, 2)
    with pytest.raises(DimensionError):
        CountInstance(4, 5, 0, 2)
    with pytest.raises(ReductionError):
        CountInstance(4, 0, 0, 3)


def test_reduce_instance_examples():
    assert reduce_instance(CountInstance(16, 12, 0, 2), 4) == CountInstance(4, 0, 1, 4)
    assert reduce_instance(CountInstance(8, 6, 0, 2), 4) == CountInstance(4, 2, 1, 2)
    assert valid_a_primes(CountInstance(8, 6, 0, 2)) == [2, 4, 8]
    with pytest.raises(ReductionError):
        reduce_instance(CountInstance(8, 6, 0, 2), 1)
    with pytest.raises(ReductionError):
        reduce_instance(CountInstance(8, 6, 0, 2), 3)


def test_upper_bound_i0():
    for n in (1, 2, 4, 8):
        assert upper_bound_i0(n, 0, 2) == 1
        assert upper_bound_i0(n, 1, 2) == n + 1


@pytest.mark.parametrize(
    "n_exp, i, expected",
    [(1, 1, 2), (2, 2, 3), (3, 7, 5), (4, 12, 15), (4, 15, 9), (4, 8, 9), (4, 14, 15)],
)
def test_bsc_class_count(n_exp, i, expected):
    assert bsc_class_count(n_exp, i) == expected


def test_bsc_class_count_outside_domain():
    with pytest.raises(ReductionError):
        bsc_class_count(3, 0)
    with pytest.raises(ReductionError):
        bsc_class_count(3, 5)


@pytest.mark.parametrize(
    "n_exp, i", [(1, 1), (2, 2), (2, 3), (3, 4), (3, 6), (3, 7), (4, 8), (4, 12), (4, 14), (4, 15)]
)
def test_class_count_matches_bsc_formula(bsc, n_exp, i):
    result = class_count(bsc, CountInstance.for_channel(bsc, 1 << n_exp, i))
    assert result.exact
    assert result.value == bsc_class_count(n_exp, i)
    assert result.reduced.i == 0


def test_class_count_i0(bsc, bec, bec_third):
    assert class_count(bsc, CountInstance.for_channel(bsc, 8, 0)).value == 1
    result = class_count(bec, CountInstance.for_channel(bec, 4, 0))
    assert (result.value, result.exactness) == (5, Exactness.EXACT)
    result = class_count(bec_third, CountInstance.for_channel(bec_third, 4, 0))
    assert (result.value, result.exactness) == (5, Exactness.UPPER_BOUND)


def test_class_count_without_direct_reduction(bsc):
    result = class_count(bsc, CountInstance.for_channel(bsc, 8, 5))
    assert result.exactness is Exactness.UPPER_BOUND
    assert result.a_prime == 4
    assert result.value == 24


def test_class_count_partition_mismatch(bec):
    with pytest.raises(ChannelError):
        class_count(bec, CountInstance(4, 2, 0, 2))


def test_choose_a_prime():
    inst = CountInstance(16, 12, 0, 2)
    assert choose_a_prime(inst) == 4
    assert choose_a_prime(inst, APrimePolicy.SQRT) == 4
    assert choose_a_prime(inst, 8) == 8
    with pytest.raises(ReductionError):
        choose_a_prime(inst, 2)
    assert choose_a_prime(CountInstance(8, 6, 0, 2), APrimePolicy.SQRT) == 2
    assert choose_a_prime(CountInstance(8, 5, 0, 2)) == 4


def test_tail_bound():
    assert tail_bound(CountInstance(4, 1, 1, 2)) == 24
    assert tail_bound(CountInstance(8, 5, 0, 2)) == 32


def test_naive_bound(bsc, bec):
    assert naive_bound(bsc, 12) == 4096
    assert naive_bound(bec, 2) == 9


def test_products_separated():
    ladder = ladder_channel()
    assert products_separated(make_bsc("1/3"), 4)
    assert products_separated(ladder, 1)
    assert not products_separated(ladder, 2)
    assert not products_separated(ladder, 1, Limits(max_separation_terms=2))


def test_products_separated_bec(bec, bec_third):
    assert products_separated(bec, 6)
    assert not products_separated(bec_third, 2)


@given(st.integers(1, 3), st.sampled_from([0, 2, 4]), st.integers(0, 10))
def test_self_and_symm_split_the_occurrence_vectors(s1, s2, n):
    assert count_self(s1, s2, n) + count_symm(s1, s2, n) == count_yprime(s1, s2, n)
    if s2 and n:
        # reversing the symm block pairs the symm vectors off
        assert count_symm(s1, s2, n) % 2 == 0


def test_occurrence_vectors_cover_every_word():
    bsc = make_bsc("1/3")
    seen = {yprime(bsc.partition, ReceivedVector(w)) for w in product(range(2), repeat=5)}
    assert len(seen) == count_yprime(0, 2, 5)


def two_pair_channel():
    # representatives 0 and 1 have reciprocal ratios; each pair reuses the other's
    w0 = (F(1, 9), F(4, 9), F(2, 9), F(2, 9))
    conj = (3, 2, 1, 0)
    return SymmetricChannel(("a", "b", "c", "d"), w0, tuple(w0[c] for c in conj), conj)


def test_class_count_exact_with_reciprocal_pairs():
    ch = two_pair_channel()
    result = class_count(ch, CountInstance.for_channel(ch, 4, 0))
    assert (result.value, result.exactness) == (5, Exactness.EXACT)
    assert enumerate_classes(ch, 2, 0).count == 5


@pytest.mark.parametrize("ch", [make_bsc("1/3"), make_bec("1/2")], ids=str)
@pytest.mark.parametrize("m", range(1, 9))
def test_multiset_channel_partition_sizes(ch, m):
    s1, s2 = ch.partition.s1, ch.partition.s2
    derived = multiset_channel(ch, m)
    assert derived.partition.s1 == count_self(s1, s2, m)
    assert derived.partition.s2 == count_symm(s1, s2, m)
