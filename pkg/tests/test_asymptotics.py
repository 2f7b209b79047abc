import math
from fractions import Fraction as F

import pytest

from rps_stoptime.asymptotics import (
    asymptotic_report,
    bounds,
    delta,
    remainder_exact,
    remainder_series,
)
from rps_stoptime.recurrence import mean_by_recurrence


def test_bounds_direct_formula():
    assert bounds(2) == (F(3, 4), F(6))
    # (1/3) 4^3 (3/2)^4 = 108
    assert bounds(4) == (F(27, 16), F(108))
    assert bounds(10) == (F(1, 3) * F(3, 2) ** 10, F(1000, 3) * F(3, 2) ** 10)
    with pytest.raises(ValueError):
        bounds(1)


def test_sandwich():
    for n in range(2, 61):
        lower, upper = bounds(n)
        assert lower <= mean_by_recurrence(n) <= upper


def test_remainder_exact_values():
    assert remainder_exact(2) == F(3, 4)
    assert remainder_exact(3) == F(9, 8)
    assert remainder_exact(4) == F(171, 112)
    for n in range(2, 30):
        assert remainder_exact(n) + F(3, 2) ** n / 3 == mean_by_recurrence(n)


def test_delta():
    assert delta(1) == 0.0
    assert delta(2) == 0.0
    assert delta(3) == pytest.approx(math.log2(3) - 1)
    assert delta(3) == pytest.approx(0.58496, abs=1e-5)
    for m in range(64):
        assert delta(2**m) == 0.0
    for l in range(1, 5000):
        assert 0.0 <= delta(l) < 1.0


def test_series_cross_check_n4():
    approx, bound = remainder_series(4, 10**6)
    assert abs(approx - 171 / 112) <= bound
    assert approx == pytest.approx(1.52678, abs=1e-4)


def test_series_l1_term_dominates():
    # with only l = 1 the bracket is (3/2)^n + (5/2)^n - 1 - 3n/2
    n = 6
    approx, _ = remainder_series(n, 1)
    expected = (1.5**n + 2.5**n - 1 - 1.5 * n) / (3 * (2**n - 1))
    assert approx == pytest.approx(expected, rel=1e-12)


def test_series_large_n_does_not_overflow():
    approx, bound = remainder_series(1200, 10)
    assert math.isfinite(approx) and approx > 0
    assert bound > 0


def test_report():
    r = asymptotic_report(2)
    assert r.ratio == 2.0 and r.remainder_exact == r.mean - r.lower
    r4 = asymptotic_report(4)
    assert F(r4.mean / r4.lower) == F(40, 21)
    assert r4.ratio == pytest.approx(40 / 21)
    assert asymptotic_report(60).ratio < asymptotic_report(10).ratio
