"""
End-to-end checks of the closed-form counts and symmetry results against
brute force, at desk scale.
"""

import random
from fractions import Fraction as F
from itertools import product

import pytest

from polarsym.channel import ReceivedVector, SymmetricChannel, apply_mask, make_bec, make_bsc, validate
from polarsym.counting import (
    CountInstance,
    bsc_class_count,
    class_count,
    count_self,
    count_yprime,
    stars_and_bars,
)
from polarsym.equivalence import (
    enumerate_classes,
    verify_bound_i0,
    verify_doubling,
    verify_reduction,
)
from polarsym.gf2 import BitVector, polar_tail, vec_mul
from polarsym.splitprob import split_prob
from polarsym.workbench import Method, OutputFormat, RunConfig, cmd_table, render

pytestmark = pytest.mark.slow

BSC = make_bsc("1/3")
BEC = make_bec("1/2")


def formula_cases():
    for n_exp in range(1, 5):
        n = 1 << n_exp
        a = n
        while a >= 1:
            if n % (2 * a) == 0:
                yield n_exp, n - a
            a //= 2


@pytest.mark.parametrize("n_exp, i", list(formula_cases()))
def test_bsc_formula_matches_brute_force(n_exp, i):
    assert enumerate_classes(BSC, n_exp, i).count == bsc_class_count(n_exp, i)


def test_occurrence_counts_match_enumeration():
    for s1, s2, n in product(range(4), (0, 2, 4), range(13)):
        if s1 + s2 == 0:
            continue
        vectors = list(stars_and_bars(s1 + s2, n))
        assert count_yprime(s1, s2, n) == len(vectors)
        assert count_self(s1, s2, n) == sum(v[s1:] == v[s1:][::-1] for v in vectors)
    assert count_self(0, 2, 7) == 0
    assert count_self(0, 2, 8) == 1
    assert count_yprime(0, 2, 8) - count_self(0, 2, 8) == 8


@pytest.mark.parametrize("ch", [BSC, BEC], ids=str)
@pytest.mark.parametrize("n", [4, 8])
def test_row_space_masks_preserve_probability(ch, n):
    rng = random.Random(f"masks:{ch}:{n}")
    n_exp = n.bit_length() - 1
    for i in range(n + 1):
        A = polar_tail(n_exp, i)
        if n == 4:
            pairs = [
                (ReceivedVector(y), u)
                for y in product(range(ch.size), repeat=n)
                for u in range(1 << A.nrows)
            ]
        else:
            pairs = [
                (ReceivedVector(tuple(rng.randrange(ch.size) for _ in range(n))), rng.randrange(1 << A.nrows))
                for _ in range(200)
            ]
        for y, u in pairs:
            moved = apply_mask(ch, vec_mul(BitVector(u, A.nrows), A), y)
            assert split_prob(ch, i, moved) == split_prob(ch, i, y)


@pytest.mark.parametrize("n_exp", [1, 2])
def test_doubling_on_the_bsc(n_exp):
    for i in range(1 << n_exp):
        for companion in range(BSC.size):
            assert verify_doubling(BSC, n_exp, i, companion).passed


@pytest.mark.parametrize("n_exp", [1, 2])
def test_doubling_on_the_bec_holds_for_binary_companions(n_exp):
    for i in range(1 << n_exp):
        for label in ("0", "1"):
            assert verify_doubling(BEC, n_exp, i, BEC.index(label)).passed


def test_doubling_on_the_bec_fails_with_erasure_companion():
    verdict = verify_doubling(BEC, 1, 1, BEC.index("e"))
    assert not verdict.passed


@pytest.mark.parametrize("n_exp, indices", [(2, range(1, 4)), (3, range(1, 8))])
def test_block_length_invariance(n_exp, indices):
    for i in indices:
        small = enumerate_classes(BSC, n_exp, i).count
        large = enumerate_classes(BSC, n_exp + 1, i).count
        assert small == large, i


@pytest.mark.parametrize("i, a_prime", [(6, 4), (4, 4), (7, 2)])
def test_reduction_soundness(i, a_prime):
    verdict = verify_reduction(BSC, 3, i, a_prime)
    assert verdict.original_count == verdict.reduced_count


@pytest.mark.parametrize("n_exp", [0, 1, 2])
def test_bec_bound_is_tight(n_exp):
    verdict = verify_bound_i0(BEC, n_exp)
    assert verdict.brute == verdict.bound == (1 << n_exp) + 1


def random_channel(rng):
    s1, pairs = rng.choice([(1, 0), (2, 0), (3, 0), (4, 0), (0, 1), (1, 1), (2, 1), (0, 2)])
    w0, w1, conj = [], [], []
    for y in range(s1):
        w = rng.randint(1, 6)
        w0.append(w)
        w1.append(w)
        conj.append(y)
    for k in range(pairs):
        a, b = s1 + 2 * k, s1 + 2 * k + 1
        x, z = rng.randint(0, 6), rng.randint(0, 6)
        w0 += [x, z]
        w1 += [z, x]
        conj += [b, a]
    w0[0] += 1
    w1[conj[0]] += 1
    total = sum(w0)
    symbols = tuple(f"y{k}" for k in range(len(w0)))
    return SymmetricChannel(
        symbols,
        tuple(F(w, total) for w in w0),
        tuple(F(w, total) for w in w1),
        tuple(conj),
    )


def test_random_channels_respect_the_bound():
    rng = random.Random(2024)
    for _ in range(20):
        ch = random_channel(rng)
        assert validate(ch) == []
        for n_exp in range(3):
            predicted = class_count(ch, CountInstance.for_channel(ch, 1 << n_exp, 0))
            brute = enumerate_classes(ch, n_exp, 0).count
            assert brute <= predicted.value
            if predicted.exact:
                assert brute == predicted.value


@pytest.mark.parametrize("ch", [BSC, BEC], ids=str)
@pytest.mark.parametrize("n", [2, 4, 8])
def test_split_probabilities_normalise(ch, n):
    domain = [ReceivedVector(y) for y in product(range(ch.size), repeat=n)]
    for i in range(n + 1):
        assert sum(split_prob(ch, i, y) for y in domain) == F(2, 1 << i)


def test_table_is_deterministic_and_beats_the_naive_bound():
    outputs = set()
    for workers in (1, 1, 2):
        cfg = RunConfig.build("bsc:1/3", 16, method=Method.BOTH, workers=workers)
        report = cmd_table(cfg)
        assert report["failures"] == []
        outputs.add(render(report, OutputFormat.CSV))
    assert len(outputs) == 1
    rows = {r["i"]: r for r in report["results"]}
    assert rows[12]["formula"] == rows[12]["brute"] == 15
    assert rows[12]["naive"] == 4096
    assert all(r["formula"] <= r["naive"] for r in report["results"])
