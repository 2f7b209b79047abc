"""Law of the stopping time from the truncated transition matrix.

The game started with ``n`` players ends at round ``k`` with probability
``(P_n^{k-1} psi_n)[n]``. Summing the geometric series in ``P_n`` gives the
moments through powers of ``(I - P_n)^{-1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .exactmath import LowerTriangularMatrix, invert_lower_triangular
from .game_model import TruncatedChain, build_truncated_chain, survival_probability

__all__ = [
    "StoppingTimePMF",
    "ExitTimeLaw",
    "MGFDomainError",
    "DEFAULT_TAIL",
    "MAX_TABLE_K",
    "stopping_time_pmf",
    "pmf_table",
    "pmf_until_tail",
    "fundamental_matrix",
    "absorption_probability",
    "absorption_from_chain",
    "mean_from_chain",
    "mean_by_matrix",
    "second_moment",
    "variance",
    "mgf",
    "exit_time_pmf",
    "exit_time_mean",
]

DEFAULT_TAIL = 1e-12
MAX_TABLE_K = 10_000


class MGFDomainError(ValueError):
    """The moment generating function diverges at the requested t."""

    def __init__(self, n: int, t: float, threshold: float):
        super().__init__(
            f"MGF of tau_{n} diverges for t >= {threshold!r} (= -ln p({n},{n})); got t = {t!r}"
        )
        self.threshold = threshold


@dataclass(frozen=True)
class StoppingTimePMF:
    n: int
    probs: tuple[Fraction, ...]
    tail_mass: Fraction

    @property
    def k_max(self) -> int:
        return len(self.probs)

    def __getitem__(self, k: int) -> Fraction:
        return self.probs[k - 1]


@dataclass(frozen=True)
class ExitTimeLaw:
    n: int
    stay_prob: Fraction
    mean: Fraction


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")


@lru_cache(maxsize=128)
def _chain(n: int) -> TruncatedChain:
    return build_truncated_chain(n)


@lru_cache(maxsize=128)
def _inverse(n: int) -> LowerTriangularMatrix:
    return _fundamental(_chain(n))


def fundamental_matrix(n: int) -> LowerTriangularMatrix:
    """``(I - P_n)^{-1}``, exact."""
    _check_n(n)
    return _inverse(n)


def stopping_time_pmf(n: int, k: int) -> Fraction:
    _check_n(n)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    chain = _chain(n)
    v = list(chain.psi)
    for _ in range(k - 1):
        v = chain.matrix.apply(v)
    return v[-1]


def _iter_pmf(n: int):
    chain = _chain(n)
    v = list(chain.psi)
    while True:
        yield v[-1]
        v = chain.matrix.apply(v)


def pmf_table(n: int, k_max: int | None = None) -> StoppingTimePMF:
    """Exact ``p_n(1..k_max)`` and the leftover mass ``P(tau_n > k_max)``.

    Without ``k_max`` the table runs until the tail drops below
    :data:`DEFAULT_TAIL`, capped at :data:`MAX_TABLE_K` rows.
    """
    _check_n(n)
    if k_max is None:
        return pmf_until_tail(n, DEFAULT_TAIL)
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    probs = []
    tail = Fraction(1)
    for p, _ in zip(_iter_pmf(n), range(k_max)):
        probs.append(p)
        tail -= p
    return StoppingTimePMF(n=n, probs=tuple(probs), tail_mass=tail)


def pmf_until_tail(n: int, tail: float | Fraction, cap: int = MAX_TABLE_K) -> StoppingTimePMF:
    """Smallest table whose exact tail mass is below ``tail`` (at most ``cap`` rows)."""
    _check_n(n)
    threshold = Fraction(tail)
    if not 0 < threshold < 1:
        raise ValueError(f"tail must lie in (0, 1), got {tail}")
    probs = []
    rest = Fraction(1)
    for p in _iter_pmf(n):
        probs.append(p)
        rest -= p
        if rest < threshold or len(probs) >= cap:
            break
    return StoppingTimePMF(n=n, probs=tuple(probs), tail_mass=rest)


def _fundamental(chain: TruncatedChain) -> LowerTriangularMatrix:
    return invert_lower_triangular(LowerTriangularMatrix.identity(chain.dim) - chain.matrix)


def absorption_from_chain(chain: TruncatedChain) -> Fraction:
    return _fundamental(chain).apply(chain.psi)[-1]


def mean_from_chain(chain: TruncatedChain) -> Fraction:
    inv = _fundamental(chain)
    return inv.apply(inv.apply(chain.psi))[-1]


def absorption_probability(n: int) -> Fraction:
    """``((I - P_n)^{-1} psi_n)[n]``; the total mass of the law, always 1."""
    _check_n(n)
    return _inverse(n).apply(_chain(n).psi)[-1]


def mean_by_matrix(n: int) -> Fraction:
    """``((I - P_n)^{-2} psi_n)[n]``."""
    _check_n(n)
    inv = _inverse(n)
    return inv.apply(inv.apply(_chain(n).psi))[-1]


def second_moment(n: int) -> Fraction:
    """``E[tau_n^2] = ((I + P_n)(I - P_n)^{-3} psi_n)[n]``."""
    _check_n(n)
    chain = _chain(n)
    inv = _inverse(n)
    w = inv.apply(inv.apply(inv.apply(chain.psi)))
    w = [a + b for a, b in zip(w, chain.matrix.apply(w))]
    return w[-1]


def variance(n: int) -> Fraction:
    return second_moment(n) - mean_by_matrix(n) ** 2


def mgf(n: int, t: float) -> float:
    """``E[exp(t tau_n)]`` in floating point.

    Finite only while ``e^t p(n, n) < 1``; the largest diagonal entry of
    ``P_n`` is its spectral radius.
    """
    _check_n(n)
    chain = _chain(n)
    rho = max(chain.matrix.diagonal())
    threshold = -math.log(rho)
    if t >= threshold:
        raise MGFDomainError(n, t, threshold)
    s = math.exp(t)
    p = np.array([[float(x) for x in row] for row in chain.matrix.rows])
    psi = np.array([float(x) for x in chain.psi])
    a = np.eye(chain.dim) - s * p
    # forward substitution on the lower-triangular system
    y = np.zeros(chain.dim)
    for i in range(chain.dim):
        y[i] = (psi[i] - a[i, :i] @ y[:i]) / a[i, i]
    return float(s * y[-1])


def exit_time_pmf(n: int, k: int) -> Fraction:
    """``P(T_ex = k) = p(n,n)^(k-1) - p(n,n)^k`` for the first drop below ``n``."""
    _check_n(n)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    stay = survival_probability(n, n)
    return stay ** (k - 1) - stay**k


def exit_time_mean(n: int) -> ExitTimeLaw:
    _check_n(n)
    stay = survival_probability(n, n)
    return ExitTimeLaw(n=n, stay_prob=stay, mean=1 / (1 - stay))
