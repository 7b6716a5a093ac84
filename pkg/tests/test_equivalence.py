from fractions import Fraction as F

import pytest

from polarsym.channel import ReceivedVector, make_bsc
from polarsym.config import Limits
from polarsym.counting import Exactness
from polarsym.equivalence import (
    Domain,
    bsc_canonicalize,
    domain_size,
    enumerate_classes,
    iter_domain,
    permute,
    prob_equivalent,
    report_from_dict,
    report_to_dict,
    symmetry_orbit,
    verify_blocklength_invariance,
    verify_bound_i0,
    verify_doubling,
    verify_permutation_theorem,
    verify_reduction,
)
from polarsym.errors import CapExceededError, ChannelError, DimensionError
from polarsym.splitprob import split_prob


def rv(text):
    return ReceivedVector(tuple(int(c) for c in text))


def test_enumerate_bsc_n2(bsc):
    report = enumerate_classes(bsc, 1, 1)
    assert report.domain is Domain.BSC_CANONICAL
    assert [c.probability for c in report.classes] == [F(5, 18), F(2, 9)]
    assert [c.size for c in report.classes] == [1, 1]
    assert [c.representative for c in report.classes] == [rv("00"), rv("10")]


def test_enumerate_bsc_n4(bsc):
    canonical = enumerate_classes(bsc, 2, 2)
    assert canonical.count == 3
    assert [c.probability * 648 for c in canonical.classes] == [25, 20, 16]
    assert [c.size for c in canonical.classes] == [1, 2, 1]
    full = enumerate_classes(bsc, 2, 2, Domain.FULL)
    assert full.count == 3
    assert [c.size for c in full.classes] == [4, 8, 4]
    assert full.domain_size == 16


@pytest.mark.parametrize("n_exp, i, expected", [(3, 7, 5), (3, 4, 5), (3, 6, 6), (4, 12, 15)])
def test_enumerate_matches_known_counts(bsc, n_exp, i, expected):
    assert enumerate_classes(bsc, n_exp, i).count == expected


def test_enumerate_bec_i0(bec, bec_third):
    assert enumerate_classes(bec, 2, 0).count == 5
    assert enumerate_classes(bec_third, 2, 0).count == 1


def test_enumerate_is_worker_independent(bsc):
    serial = enumerate_classes(bsc, 4, 12)
    parallel = enumerate_classes(bsc, 4, 12, workers=2)
    assert serial == parallel


def test_enumerate_caps(bec, bsc):
    with pytest.raises(CapExceededError):
        enumerate_classes(bec, 3, 0, limits=Limits(max_domain=100))
    with pytest.raises(CapExceededError):
        enumerate_classes(bsc, 3, 0, limits=Limits(max_row_space=16))
    with pytest.raises(DimensionError):
        enumerate_classes(bsc, 2, 5)


def test_degenerate_flag():
    report = enumerate_classes(make_bsc("1/2"), 2, 2)
    assert report.degenerate
    assert report.count == 1


def test_iter_domain_order(bsc, bec):
    assert list(iter_domain(bsc, 4, 2, Domain.BSC_CANONICAL)) == [
        rv("0000"), rv("0100"), rv("1000"), rv("1100")
    ]
    full = list(iter_domain(bec, 2, 0, Domain.FULL))
    assert full == sorted(full)
    assert len(full) == domain_size(bec, 2, 0, Domain.FULL) == 9
    assert list(iter_domain(bec, 2, 0, Domain.FULL, 4, 6)) == full[4:6]
    with pytest.raises(ChannelError):
        next(iter_domain(bec, 2, 1, Domain.BSC_CANONICAL))


def test_prob_equivalent(bsc):
    assert prob_equivalent(bsc, 2, rv("1000"), rv("0100"))
    assert not prob_equivalent(bsc, 2, rv("0000"), rv("1100"))
    with pytest.raises(DimensionError):
        prob_equivalent(bsc, 1, rv("00"), rv("0000"))


def test_bsc_canonicalize(bsc):
    assert bsc_canonicalize(bsc, 2, rv("0010")) == rv("1000")
    assert bsc_canonicalize(bsc, 2, rv("1100")) == rv("1100")
    for y in iter_domain(bsc, 8, 3, Domain.FULL, 0, 256):
        c = bsc_canonicalize(bsc, 3, y)
        assert not any(c.syms[3:])
        assert split_prob(bsc, 3, c) == split_prob(bsc, 3, y)


def test_bsc_canonicalize_needs_bsc(bec):
    with pytest.raises(ChannelError):
        bsc_canonicalize(bec, 1, ReceivedVector((0, 1)))


def test_symmetry_orbit(bsc, bec):
    orbit = symmetry_orbit(bsc, 2, rv("1000"))
    assert orbit == {rv("1000"), rv("0010"), rv("0111"), rv("1101")}
    p = split_prob(bsc, 2, rv("1000"))
    assert all(split_prob(bsc, 2, v) == p for v in orbit)
    erased = ReceivedVector((1, 1))
    assert symmetry_orbit(bec, 0, erased) == {erased}


def test_permute():
    assert permute(rv("1100"), (2, 1, 0, 3)) == rv("0110")
    with pytest.raises(DimensionError):
        permute(rv("1100"), (0, 1, 2))


def test_permutation_theorem(bsc, bec):
    verdict = verify_permutation_theorem(bsc, 2, (2, 1, 0, 3))
    assert verdict.premise_holds
    assert verdict.passed
    assert verdict.checked == 16
    verdict = verify_permutation_theorem(bec, 2, (2, 1, 0, 3))
    assert verdict.passed and verdict.checked == 81
    verdict = verify_permutation_theorem(bsc, 2, (1, 0, 2, 3))
    assert not verdict.premise_holds
    assert verdict.passed
    assert verdict.checked == 0


@pytest.mark.parametrize("companion", [0, 1])
@pytest.mark.parametrize("n_exp, i", [(1, 1), (2, 1), (2, 2), (2, 3)])
def test_doubling_bsc(bsc, companion, n_exp, i):
    assert verify_doubling(bsc, n_exp, i, companion).passed


def test_doubling_bec_counterexample(bec):
    assert split_prob(bec, 1, ReceivedVector((0, 0))) == F(1, 8)
    assert split_prob(bec, 1, ReceivedVector((0, 1))) == F(1, 8)
    assert split_prob(bec, 1, ReceivedVector((0, 0, 1, 1))) == F(1, 64)
    assert split_prob(bec, 1, ReceivedVector((0, 1, 1, 1))) == F(1, 32)
    verdict = verify_doubling(bec, 1, 1, bec.index("e"))
    assert not verdict.passed
    first, other = verdict.counterexample
    assert split_prob(bec, 1, first) == split_prob(bec, 1, other)


def test_doubling_rejects_bad_companion(bsc):
    with pytest.raises(DimensionError):
        verify_doubling(bsc, 1, 1, 2)


def test_blocklength_invariance(bsc, bec):
    verdict = verify_blocklength_invariance(bsc, 2, 2, 3)
    assert verdict.passed
    assert verdict.counts == {4: 3, 8: 3}
    with pytest.raises(ChannelError):
        verify_blocklength_invariance(bec, 1, 1, 2)


@pytest.mark.parametrize("i, a_prime, expected", [(6, 4, 6), (4, 4, 5), (7, 2, 5)])
def test_reduction_soundness(bsc, i, a_prime, expected):
    verdict = verify_reduction(bsc, 3, i, a_prime)
    assert verdict.passed
    assert verdict.original_count == expected


def test_bound_i0(bec, bec_third):
    verdict = verify_bound_i0(bec, 2)
    assert (verdict.brute, verdict.bound, verdict.exactness) == (5, 5, Exactness.EXACT)
    verdict = verify_bound_i0(bec_third, 2)
    assert (verdict.brute, verdict.bound) == (1, 5)
    assert verdict.exactness is Exactness.UPPER_BOUND
    assert verdict.passed


def test_report_round_trip(bec):
    report = enumerate_classes(bec, 1, 1)
    dct = report_to_dict(report, bec)
    assert dct["count"] == report.count
    assert all("/" in c["probability"] for c in dct["classes"])
    assert report_from_dict(dct, bec) == report
    dct["count"] += 1
    with pytest.raises(DimensionError):
        report_from_dict(dct, bec)
