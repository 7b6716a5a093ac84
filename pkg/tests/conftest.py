from fractions import Fraction

import pytest

from polarsym.channel import make_bec, make_bsc


@pytest.fixture
def bsc():
    return make_bsc("1/3")


@pytest.fixture
def bec():
    return make_bec("1/2")


@pytest.fixture
def bec_third():
    return make_bec(Fraction(1, 3))
