"""Mean stopping times from the one-step recurrence and from the h_k closed form."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .exactmath import SeriesCoefficients, exp_series, ordinary_to_egf, series_divide

__all__ = [
    "MeanTable",
    "HCoefficients",
    "mean_table",
    "mean_by_recurrence",
    "h_series",
    "h_coefficients",
    "mean_by_closed_form",
]


@dataclass(frozen=True)
class MeanTable:
    """``values[n - 1]`` is the mean stopping time ``E_n``; ``E_1 = 0``."""

    values: tuple[Fraction, ...]

    @property
    def max_n(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> Fraction:
        if not 1 <= n <= self.max_n:
            raise IndexError(n)
        return self.values[n - 1]


@dataclass(frozen=True)
class HCoefficients:
    """``values[k - 1]`` is ``h_k``, the k-th EGF coefficient of h(x)."""

    values: tuple[Fraction, ...]

    @property
    def max_k(self) -> int:
        return len(self.values)

    def __getitem__(self, k: int) -> Fraction:
        if not 1 <= k <= self.max_k:
            raise IndexError(k)
        return self.values[k - 1]


_means: list[Fraction] = [Fraction(0)]
_means_lock = threading.Lock()


def mean_table(max_n: int) -> MeanTable:
    """Means ``E_1..E_max_n``, extending a shared table as needed.

    ``(2^n - 1) E_n = 3^(n-1) + sum_{j=1}^{n} C(n, j) E_j`` has ``E_n`` on both
    sides; moving the ``j = n`` term over gives the divisor ``2^n - 2``.
    """
    if max_n < 1:
        raise ValueError(f"n must be >= 1, got {max_n}")
    with _means_lock:
        for n in range(len(_means) + 1, max_n + 1):
            acc = Fraction(3 ** (n - 1))
            for j in range(1, n):
                acc += comb(n, j) * _means[j - 1]
            _means.append(acc / (2**n - 2))
        return MeanTable(tuple(_means[:max_n]))


def mean_by_recurrence(n: int) -> Fraction:
    return mean_table(n)[n]


def h_series(order: int) -> SeriesCoefficients:
    """Ordinary coefficients of ``h(x) = (e^{3x} - 1 - 3x) / (3 (e^{2x} - 1))``."""
    # both sides vanish at x = 0; one extra term survives the cancellation
    num = exp_series(3, order + 1) - SeriesCoefficients([1, 3] + [0] * order)
    den = exp_series(2, order + 1) - SeriesCoefficients([1] + [0] * (order + 1))
    return series_divide(num.scale(Fraction(1, 3)), den, order)


@lru_cache(maxsize=None)
def _h_values(max_k: int) -> tuple[Fraction, ...]:
    return tuple(ordinary_to_egf(h_series(max_k))[1:])


def h_coefficients(max_k: int) -> HCoefficients:
    if max_k < 1:
        raise ValueError(f"max_k must be >= 1, got {max_k}")
    return HCoefficients(_h_values(max_k))


def mean_by_closed_form(n: int) -> Fraction:
    """``E_n = sum_{k=1}^{n-1} C(n, k) h_k / (2^k - 1)``."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    h = h_coefficients(n - 1)
    return sum((comb(n, k) * h[k] / (2**k - 1) for k in range(1, n)), Fraction(0))
