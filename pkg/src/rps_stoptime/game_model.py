"""One round of Rock-Paper-Scissors among ``i`` players, as a Markov kernel.

States are player counts. From ``i`` players a round leaves ``j`` survivors
with probability ``p(i, j)``; state 1 is absorbing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .exactmath import LowerTriangularMatrix

__all__ = [
    "survival_probability",
    "transition_row",
    "TruncatedChain",
    "build_truncated_chain",
    "state_to_index",
    "index_to_state",
]


def _check_positive(name: str, value: int) -> None:
    if not isinstance(value, int) or isinstance(value, bool):
        raise TypeError(f"{name} must be an int, got {type(value).__name__}")
    if value < 1:
        raise ValueError(f"{name} must be >= 1, got {value}")


@lru_cache(maxsize=None)
def survival_probability(i: int, j: int) -> Fraction:
    """Probability that ``j`` of ``i`` players survive one round.

    ``C(i, j) / 3^(i-1)`` for ``j < i``; the stay probability
    ``1 - (2^i - 2) / 3^(i-1)`` for ``j == i``; zero for ``j > i``.
    By convention ``p(1, 1) = 1``.
    """
    _check_positive("i", i)
    _check_positive("j", j)
    if j > i:
        return Fraction(0)
    if i == 1:
        return Fraction(1)
    if j < i:
        return Fraction(comb(i, j), 3 ** (i - 1))
    # 1 - 2 (2/3)^(i-1) (1 - 2^-(i-1)) == 1 - (2^i - 2)/3^(i-1)
    return 1 - Fraction(2**i - 2, 3 ** (i - 1))


def transition_row(i: int) -> list[Fraction]:
    """``[p(i, 1), ..., p(i, i)]``."""
    _check_positive("i", i)
    return [survival_probability(i, j) for j in range(1, i + 1)]


# Matrix row/column r of a truncated chain holds player-count state r + 2.
def state_to_index(state: int) -> int:
    return state - 2


def index_to_state(index: int) -> int:
    return index + 2


@dataclass(frozen=True)
class TruncatedChain:
    """Transient part of the chain on states ``2..n``.

    ``matrix`` is the sub-stochastic block ``p(i, j)`` for ``2 <= j <= i <= n``;
    ``psi`` holds the one-step absorption probabilities ``p(j, 1)``.
    """

    n: int
    matrix: LowerTriangularMatrix
    psi: tuple[Fraction, ...]

    def entry(self, i: int, j: int) -> Fraction:
        """Transition probability between player-count states ``i`` and ``j``."""
        return self.matrix[state_to_index(i), state_to_index(j)]

    def absorption(self, j: int) -> Fraction:
        return self.psi[state_to_index(j)]

    @property
    def dim(self) -> int:
        return self.n - 1


def build_truncated_chain(n: int, prob=None) -> TruncatedChain:
    """Build ``(P_n, psi_n)`` for a game started with ``n`` players.

    ``prob`` overrides the kernel ``p(i, j)``; used to check that validation
    catches a corrupted model.
    """
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    p = survival_probability if prob is None else prob
    states = range(2, n + 1)
    rows = [[p(i, j) if j <= i else 0 for j in states] for i in states]
    psi = tuple(Fraction(p(j, 1)) for j in states)
    return TruncatedChain(n=n, matrix=LowerTriangularMatrix(rows), psi=psi)
