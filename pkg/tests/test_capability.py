import math

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rtladder.capability import analyze_pair, attack_window, choose_lambda, coverage_fraction, coverage_ratio
from rtladder.model import TimeOverflowError


@pytest.mark.parametrize("args, c", [((2, 10, 8), 1.0), ((1, 6, 4), 0.5), ((7, 7, 7), 1.0), ((5, 30, 20), 0.5)])
def test_coverage(args, c):
    assert coverage_ratio(*args) == c


def test_coverage_is_exact():
    assert coverage_fraction(1, 300, 900) == Fraction(1, 300)
    assert coverage_fraction(300, 300, 900) == 1
    with pytest.raises(ValueError):
        coverage_fraction(0, 3, 4)


@pytest.mark.parametrize("args, lam", [((2, 10, 8), 2), ((1, 6, 4), 1), ((9, 9, 9), 9), ((7, 12, 18), 6)])
def test_choose_lambda(args, lam):
    assert choose_lambda(*args) == lam


@pytest.mark.parametrize("args, w", [((10, 8, 10), 400), ((13, 13, 4), 52), ((40, 33, 3), 3960)])
def test_attack_window(args, w):
    assert attack_window(*args) == w


def test_attack_window_errors():
    with pytest.raises(ValueError):
        attack_window(10, 8, 0)
    with pytest.raises(TimeOverflowError):
        attack_window(2**40 + 1, 2**20, 2**10)


@given(st.integers(1, 500), st.integers(1, 500), st.integers(1, 500), st.integers(1, 20))
def test_scale_invariance(e, po, pv, k):
    assert coverage_fraction(e, po, pv) == coverage_fraction(k * e, k * po, k * pv)


@given(st.integers(1, 500), st.integers(1, 500), st.integers(1, 500))
def test_report_consistency(e, po, pv):
    rep = analyze_pair(e, po, pv)
    assert rep.full_coverage == (rep.coverage >= 1) == (e >= math.gcd(po, pv))
    assert 1 <= rep.recommended_lambda <= e
    assert rep.to_dict()["coverage_exact"] == str(rep.coverage)
