from fractions import Fraction as F
from math import comb, factorial

import pytest

from rps_stoptime.exactmath import SeriesCoefficients, exp_series
from rps_stoptime.recurrence import (
    h_coefficients,
    mean_by_closed_form,
    mean_by_recurrence,
    mean_table,
)

GOLDEN = {1: F(0), 2: F(3, 2), 3: F(9, 4), 4: F(45, 14), 5: F(157, 35)}


@pytest.mark.parametrize("n, expected", GOLDEN.items())
def test_recurrence_golden(n, expected):
    assert mean_by_recurrence(n) == expected


def test_h_golden():
    assert h_coefficients(2).values == (F(3, 4), 0)
    h = h_coefficients(6)
    assert h[4] == F(3, 5) and h[5] == F(1, 4) and h[6] == F(-3, 7)


def test_closed_form_examples():
    h = h_coefficients(3)
    assert 4 * h[1] + 6 * h[2] / 3 + 4 * h[3] / 7 == 3 + F(3, 14)
    assert mean_by_closed_form(2) == 2 * F(3, 4)
    assert mean_by_closed_form(4) == F(45, 14)
    assert mean_by_closed_form(5) == F(157, 35)


def test_argument_errors():
    with pytest.raises(ValueError):
        mean_by_recurrence(0)
    with pytest.raises(ValueError):
        h_coefficients(0)
    with pytest.raises(ValueError):
        mean_by_closed_form(1)


def test_methods_agree_and_residual_vanishes():
    table = mean_table(40)
    assert table.max_n == 40 and table[1] == 0
    for n in range(2, 41):
        e = table[n]
        assert e == mean_by_closed_form(n)
        residual = (2**n - 1) * e - 3 ** (n - 1) - sum(comb(n, j) * table[j] for j in range(1, n + 1))
        assert residual == 0
        if n > 2:
            assert e > table[n - 1]


def test_generating_function_equation():
    order = 12
    table = mean_table(order)
    e = SeriesCoefficients([F(0)] + [table[n] / factorial(n) for n in range(1, order + 1)])
    one = SeriesCoefficients([1] + [0] * order)
    lhs = e.substitute_scaled(2)
    rhs = (exp_series(1, order) + one) * e + (exp_series(3, order) - one - SeriesCoefficients([0, 3] + [0] * (order - 1))).scale(F(1, 3))
    assert (lhs - rhs).coeffs == (0,) * (order + 1)
