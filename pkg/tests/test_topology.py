import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from projcurv.errors import DomainError, GapError, InputError, InvalidBettiError
from projcurv.topology import (BettiVector, all_checks, average_curvature, check_basicestimate,
                               check_cpcl_a, check_detailedestimate, classify_degree,
                               degree_interval, euler_characteristic, gysin_transfer,
                               hypersurface_betti, jensen_value, middle_sum)


def test_betti_validation():
    with pytest.raises(InvalidBettiError):
        BettiVector((1, -1, 1), 1)
    with pytest.raises(InvalidBettiError):
        BettiVector((2, 0, 2), 1)
    with pytest.raises(InvalidBettiError):
        BettiVector((1, 2, 3), 1)
    with pytest.raises(InvalidBettiError):
        BettiVector((1, 0, 0, 0, 1), 2)
    b = BettiVector((1, 4, 1), 1)
    assert b.n == 2 and b.total == 6 and b[-1] == 0 and b[5] == 0


def test_euler_characteristic_values():
    assert [euler_characteristic(d, 2) for d in range(1, 5)] == [3, 4, 9, 24]
    assert [euler_characteristic(d, 1) for d in range(1, 5)] == [2, 2, 0, -4]
    with pytest.raises(InputError):
        euler_characteristic(0, 1)


@given(st.integers(1, 60))
def test_surface_betti_matches_euler(d):
    b = hypersurface_betti(d, 2)
    assert b.dims[0] - b.dims[1] + b.dims[2] - b.dims[3] + b.dims[4] == euler_characteristic(d, 2)


@given(st.integers(1, 60))
def test_curve_betti_matches_euler(d):
    b = hypersurface_betti(d, 1)
    assert 2 - b.dims[1] == euler_characteristic(d, 1)


@pytest.mark.parametrize("b,lift", [((1, 0, 1), (1, 0, 0, 1)), ((1, 2, 1), (1, 2, 2, 1)),
                                    ((1, 0, 2, 0, 1), (1, 0, 1, 1, 0, 1))])
def test_gysin_examples(b, lift):
    B = BettiVector(b, (len(b) - 1) // 2)
    assert gysin_transfer(B).dims == lift


@given(st.integers(1, 40), st.integers(1, 2))
def test_gysin_sum_is_middle_sum(d, m):
    b = hypersurface_betti(d, m)
    assert gysin_transfer(b).total == middle_sum(b)


def test_gysin_rejects_negative():
    with pytest.raises(InvalidBettiError):
        gysin_transfer(BettiVector((1, 0, 0, 0, 0, 0, 1), 3, check_even=False))
    with pytest.raises(InputError):
        gysin_transfer(BettiVector((1, 0, 0, 1), 1, check_even=False))


def test_checks_quadric():
    b = hypersurface_betti(2, 2)
    res = {c.name: c for c in all_checks(b, 4.0)}
    assert all(c.passed for c in res.values())
    assert res["middle_sum"].margin == 0
    assert res["betti_sum"].lhs == 4 and res["betti_sum"].rhs == 6.0


def test_checks_fail_when_too_small():
    b = hypersurface_betti(4, 1)
    assert not check_basicestimate(b, 3.0).passed
    assert not check_detailedestimate(b, 3.0).passed
    assert not check_cpcl_a(b, 3.0).passed
    with pytest.raises(DomainError):
        check_cpcl_a(b, 1.0)
    with pytest.raises(DomainError):
        check_basicestimate(b, math.nan)


def test_degree_intervals():
    assert degree_interval(1) == (2, 2)
    assert degree_interval(2) == (4, 8)
    assert degree_interval(3) == (10, 18)
    for d in range(1, 50):
        assert degree_interval(d)[1] < degree_interval(d + 1)[0]


@pytest.mark.parametrize("T,d", [(2.0, 1), (4.0, 2), (8.0, 2), (10.0, 3), (11.0, 3), (18.0, 3),
                                 (23.0, 4), (39.6, 5)])
def test_classify(T, d):
    assert classify_degree(T) == d


@pytest.mark.parametrize("T", [3.0, 9.0, 51.0, 19.0])
def test_classify_gap(T):
    with pytest.raises(GapError):
        classify_degree(T)


def test_classify_domain():
    with pytest.raises(DomainError):
        classify_degree(1.5)


@given(st.integers(1, 100))
def test_jensen_identity(d):
    assert jensen_value(d) == 2 * d * d - 4 * d + 4
    assert average_curvature(d) == Fraction(2 * (3 - d))
