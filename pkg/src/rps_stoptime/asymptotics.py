"""Growth of the mean stopping time.

``E_n`` sits between ``(3/2)^n / 3`` and ``n^3 (3/2)^n / 3``, and
``E_n = (3/2)^n / 3 + r_n`` with ``r_n = o((3/2)^n)``. The remainder also has
an explicit series in ``l`` weighted by ``2^(delta(l) n)``, where ``delta(l)``
is the fractional part of ``log2 l``; that series is only a float cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .recurrence import mean_by_recurrence

__all__ = [
    "AsymptoticReport",
    "bounds",
    "delta",
    "remainder_exact",
    "remainder_series",
    "asymptotic_report",
]

_THREE_HALVES = Fraction(3, 2)


@dataclass(frozen=True)
class AsymptoticReport:
    n: int
    mean: Fraction
    lower: Fraction
    upper: Fraction
    remainder_exact: Fraction
    ratio: float


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")


def bounds(n: int) -> tuple[Fraction, Fraction]:
    _check_n(n)
    lower = _THREE_HALVES**n / 3
    return lower, lower * n**3


def delta(l: int) -> float:
    """Fractional part of ``log2 l``; exactly 0 at powers of two."""
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    m = l.bit_length() - 1
    if l == 1 << m:
        return 0.0
    return math.log2(l / (1 << m))


def remainder_exact(n: int) -> Fraction:
    _check_n(n)
    return mean_by_recurrence(n) - bounds(n)[0]


def remainder_series(n: int, l_max: int) -> tuple[float, float]:
    """Truncate the remainder series at ``l_max``.

    Returns ``(approximation, truncation_bound)``. The neglected part is at most
    ``(1/3) / (2^n - 1) * sum_s C(n, s) (3/2)^s * 2^n / l_max`` because
    ``2^(delta n) < 2^n`` and ``sum_{l > L} l^-s <= 1/L`` for ``s >= 2``.

    Every term is scaled by ``2^-n`` before exponentiation so large ``n`` does
    not overflow.
    """
    _check_n(n)
    if l_max < 1:
        raise ValueError(f"l_max must be >= 1, got {l_max}")
    ln2 = math.log(2.0)
    l = np.arange(1, l_max + 1, dtype=np.float64)
    # frexp is exact: l = m 2^e with m in [0.5, 1), so floor(log2 l) = e - 1
    floor_log = np.frexp(l)[1] - 1
    log_l = np.log(l)
    # log(2^(delta(l) n) 2^-n) = n (log l - floor(log2 l) ln2) - n ln2
    base = n * (log_l - floor_log * ln2) - n * ln2

    inner = 0.0
    weight_sum = 0.0
    for s in range(2, n + 1):
        log_weight = math.lgamma(n + 1) - math.lgamma(s + 1) - math.lgamma(n - s + 1) + s * math.log(1.5)
        weight_sum += math.exp(log_weight - n * ln2)
        inner += float(np.sum(np.exp(log_weight - s * log_l + base)))
    # (1/3) / (2^n - 1), with the 2^-n scaling folded back in
    pref = (1.0 / 3.0) / (1.0 - 2.0 ** (-n))
    approx = pref * (0.75**n + inner)
    try:
        bound = pref * weight_sum * math.exp(n * ln2 - math.log(l_max))
    except OverflowError:
        bound = math.inf
    return approx, bound


def asymptotic_report(n: int) -> AsymptoticReport:
    _check_n(n)
    mean = mean_by_recurrence(n)
    lower, upper = bounds(n)
    return AsymptoticReport(
        n=n,
        mean=mean,
        lower=lower,
        upper=upper,
        remainder_exact=mean - lower,
        ratio=float(mean / lower),
    )
