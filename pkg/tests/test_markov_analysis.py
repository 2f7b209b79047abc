import math
from fractions import Fraction as F
from functools import lru_cache

import pytest

from rps_stoptime.game_model import survival_probability
from rps_stoptime.markov_analysis import (
    MGFDomainError,
    absorption_probability,
    exit_time_mean,
    exit_time_pmf,
    fundamental_matrix,
    mean_by_matrix,
    mgf,
    pmf_table,
    pmf_until_tail,
    stopping_time_pmf,
    variance,
)
from rps_stoptime.recurrence import mean_by_recurrence


@lru_cache(maxsize=None)
def pmf_by_recursion(n, k):
    """P(tau_n = k) from first-step analysis; tau_1 = 0."""
    if n == 1:
        return F(int(k == 0))
    if k == 0:
        return F(0)
    return sum(survival_probability(n, j) * pmf_by_recursion(j, k - 1) for j in range(1, n + 1))


def test_pmf_examples():
    assert stopping_time_pmf(3, 1) == F(1, 3)
    assert stopping_time_pmf(2, 3) == F(2, 27) == F(1, 3) ** 2 * F(2, 3)
    assert stopping_time_pmf(2, 1) == F(2, 3)


@pytest.mark.parametrize("n", range(2, 12))
def test_first_round_absorption(n):
    assert stopping_time_pmf(n, 1) == F(3 * n, 3**n)


def test_pmf_tables():
    t = pmf_table(2, 2)
    assert t.probs == (F(2, 3), F(2, 9)) and t.tail_mass == F(1, 9)
    t = pmf_table(3, 1)
    assert t.probs == (F(1, 3),) and t.tail_mass == F(2, 3)
    t = pmf_table(4, 1)
    assert t.probs == (F(4, 27),) and t.tail_mass == F(23, 27)


def test_default_table_reaches_tail():
    t = pmf_table(5)
    assert t.tail_mass < F(1e-12)
    assert sum(t.probs) + t.tail_mass == 1
    assert pmf_table(5, t.k_max - 1).tail_mass >= F(1e-12)


def test_tail_table_respects_cap():
    t = pmf_until_tail(30, 1e-12, cap=50)
    assert t.k_max == 50 and sum(t.probs) + t.tail_mass == 1


def test_invalid_arguments():
    for bad in [(1, 1), (2, 0)]:
        with pytest.raises(ValueError):
            stopping_time_pmf(*bad)
    with pytest.raises(ValueError):
        pmf_table(2, 0)


@pytest.mark.parametrize("n", range(2, 9))
def test_pmf_matches_first_step_recursion(n):
    for k in range(1, 11):
        assert stopping_time_pmf(n, k) == pmf_by_recursion(n, k)


@pytest.mark.parametrize("n", range(2, 21))
def test_total_mass_is_one(n):
    assert absorption_probability(n) == 1


def test_matrix_means():
    assert mean_by_matrix(2) == F(3, 2)
    assert mean_by_matrix(3) == F(9, 4)
    assert mean_by_matrix(4) == F(45, 14)
    inv = fundamental_matrix(4)
    assert (inv @ inv).rows[-1] == (F(639, 196), F(72, 49), F(729, 196))


def test_matrix_mean_equals_recurrence():
    for n in range(2, 41):
        assert mean_by_matrix(n) == mean_by_recurrence(n)


@pytest.mark.parametrize("n, expected, cutoff", [(2, F(3, 4), 120), (3, F(27, 16), 150), (4, F(657, 196), 300)])
def test_variance_against_truncated_moment_sum(n, expected, cutoff):
    m1 = sum(k * pmf_by_recursion(n, k) for k in range(1, cutoff))
    m2 = sum(k * k * pmf_by_recursion(n, k) for k in range(1, cutoff))
    assert abs((m2 - m1 * m1) - expected) < F(1, 10**20)
    assert variance(n) == expected


def test_geometric_variance_closed_form():
    p = F(2, 3)
    assert variance(2) == (1 - p) / p**2


def test_variance_positive():
    assert all(variance(n) > 0 for n in range(2, 21))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_mgf_at_zero(n):
    assert mgf(n, 0.0) == pytest.approx(1.0, abs=1e-14)


def test_mgf_geometric():
    assert mgf(2, math.log(0.5)) == pytest.approx(2 / 5, rel=1e-14)


def test_mgf_derivative_is_mean():
    h = 1e-5
    d = (mgf(4, h) - mgf(4, -h)) / (2 * h)
    assert d == pytest.approx(45 / 14, rel=1e-6)


def test_mgf_domain():
    threshold = -math.log(13 / 27)
    with pytest.raises(MGFDomainError) as exc:
        mgf(4, threshold + 0.01)
    assert exc.value.threshold == pytest.approx(threshold)
    assert math.isfinite(mgf(4, threshold - 0.01))


def test_exit_time_pmf():
    for n in (2, 5, 9):
        assert exit_time_pmf(n, 1) == 1 - survival_probability(n, n)
    assert exit_time_pmf(2, 2) == F(2, 9)
    assert exit_time_pmf(4, 2) == F(182, 729)


@pytest.mark.parametrize("n", [2, 4, 7])
def test_exit_time_mass_telescopes(n):
    stay = survival_probability(n, n)
    for big_k in (1, 5, 20):
        assert sum(exit_time_pmf(n, k) for k in range(1, big_k + 1)) == 1 - stay**big_k


def test_exit_time_mean():
    assert exit_time_mean(2).mean == F(3, 2)
    assert exit_time_mean(3).mean == F(3, 2)
    assert exit_time_mean(4).mean == F(27, 14)
    for n in range(2, 21):
        law = exit_time_mean(n)
        assert law.mean == 1 / (1 - law.stay_prob)
        assert 0 < law.stay_prob < 1
        assert law.mean <= mean_by_matrix(n)
