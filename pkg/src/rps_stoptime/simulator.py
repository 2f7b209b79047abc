"""Seeded Monte Carlo play of the elimination game.

Gestures: 0 = Rock, 1 = Paper, 2 = Scissors; gesture ``g`` is beaten by
``(g + 1) % 3``. A round is decisive iff exactly two gestures appear; the
winners of the pair survive.

Trials are split into fixed-size blocks. Block ``b`` draws from its own PCG64
stream seeded by ``SeedSequence(seed, spawn_key=(b,))``, so results depend
only on ``(n, trials, seed)`` and not on how many threads run the blocks.
"""

from __future__ import annotations

import math
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import stats

__all__ = [
    "RNG_ALGORITHM",
    "BLOCK_SIZE",
    "ROUND_CAP",
    "RoundCapExceeded",
    "SimulationReport",
    "round_outcome",
    "play_round",
    "play_rounds",
    "simulate_game",
    "estimate",
    "block_rng",
    "chi_square_fit",
]

RNG_ALGORITHM = "numpy PCG64, SeedSequence(seed, spawn_key=(block,))"
BLOCK_SIZE = 1 << 16
ROUND_CAP = 10**7
THREADS_ENV = "RPS_STOPTIME_THREADS"

ROCK, PAPER, SCISSORS = 0, 1, 2


class RoundCapExceeded(RuntimeError):
    pass


@dataclass
class SimulationReport:
    n: int
    trials: int
    seed: int
    mean: float
    variance: float
    std_error: float
    histogram: dict[int, int] = field(default_factory=dict)
    max_k_observed: int = 0
    rng: str = RNG_ALGORITHM


def round_outcome(gestures: Sequence[int]) -> int:
    """Survivors after one round with the given gestures."""
    counts = [0, 0, 0]
    for g in gestures:
        counts[g] += 1
    present = [g for g in range(3) if counts[g]]
    if len(present) != 2:
        return len(gestures)
    missing = 3 - sum(present)
    # the pair lacking `missing` is won by the gesture that beats its partner
    return counts[(missing + 2) % 3]


def play_round(players: int, rng: np.random.Generator) -> int:
    if players < 2:
        raise ValueError(f"a round needs at least 2 players, got {players}")
    return round_outcome(rng.integers(0, 3, size=players).tolist())


def play_rounds(players: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One round for many independent games at once.

    Per-game gesture counts are drawn as a multinomial(players, 1/3, 1/3, 1/3)
    split, which is the law of ``players`` independent uniform gestures.
    """
    players = np.asarray(players, dtype=np.int64)
    rock = rng.binomial(players, 1.0 / 3.0)
    paper = rng.binomial(players - rock, 0.5)
    scissors = players - rock - paper
    counts = np.stack([rock, paper, scissors])
    present = (counts > 0).sum(axis=0)
    missing = 3 - ((counts > 0) * np.arange(3)[:, None]).sum(axis=0)
    winner = (missing + 2) % 3
    winners = np.take_along_axis(counts, winner[None, :], axis=0)[0]
    return np.where(present == 2, winners, players)


def simulate_game(n: int, rng: np.random.Generator) -> int:
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    players, rounds = n, 0
    while players > 1:
        if rounds >= ROUND_CAP:
            raise RoundCapExceeded(f"game with n={n} still running after {ROUND_CAP} rounds")
        players = play_round(players, rng)
        rounds += 1
    return rounds


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def _run_block(n: int, size: int, seed: int, block: int) -> np.ndarray:
    """Stopping times of ``size`` games driven by block ``block``'s stream."""
    rng = block_rng(seed, block)
    players = np.full(size, n, dtype=np.int64)
    taus = np.zeros(size, dtype=np.int64)
    active = np.arange(size)
    rounds = 0
    while active.size:
        if rounds >= ROUND_CAP:
            raise RoundCapExceeded(f"block {block} still running after {ROUND_CAP} rounds")
        rounds += 1
        survivors = play_rounds(players[active], rng)
        players[active] = survivors
        done = survivors == 1
        taus[active[done]] = rounds
        active = active[~done]
    return taus


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        return max(1, int(raw))
    return min(8, os.cpu_count() or 1)


def estimate(n: int, trials: int, seed: int, threads: int | None = None) -> SimulationReport:
    """Play ``trials`` games of ``n`` players and summarise the stopping times."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if trials < 1:
        raise ValueError("trials must be positive")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    sizes = [BLOCK_SIZE] * (trials // BLOCK_SIZE)
    if trials % BLOCK_SIZE:
        sizes.append(trials % BLOCK_SIZE)
    workers = threads if threads is not None else _thread_count()
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        futures = [pool.submit(_run_block, n, size, seed, b) for b, size in enumerate(sizes)]
        # merge strictly in block order
        histogram: Counter[int] = Counter()
        for fut in futures:
            ks, counts = np.unique(fut.result(), return_counts=True)
            histogram.update(dict(zip(ks.tolist(), counts.tolist())))

    # integer moments are exact, so the float summary is reproducible
    s1 = sum(k * c for k, c in histogram.items())
    s2 = sum(k * k * c for k, c in histogram.items())
    mean = Fraction(s1, trials)
    var = Fraction(s2 - s1 * mean, trials - 1) if trials > 1 else Fraction(0)
    return SimulationReport(
        n=n,
        trials=trials,
        seed=seed,
        mean=float(mean),
        variance=float(var),
        std_error=math.sqrt(float(var) / trials),
        histogram=dict(sorted(histogram.items())),
        max_k_observed=max(histogram),
    )


def chi_square_fit(
    histogram: dict[int, int], probs: Sequence[Fraction], min_expected: float = 5.0
) -> tuple[float, int, float]:
    """Pearson chi-square of an observed stopping-time histogram.

    ``probs[k - 1]`` is the exact ``P(tau = k)``; the mass beyond ``probs``
    goes into a final tail bin. Adjacent bins are pooled until each expects
    at least ``min_expected`` counts. Returns ``(statistic, dof, p_value)``.
    """
    total = sum(histogram.values())
    observed_bins: list[int] = []
    expected_bins: list[float] = []
    obs_acc, exp_acc = 0, Fraction(0)
    for k, p in enumerate(probs, start=1):
        obs_acc += histogram.get(k, 0)
        exp_acc += p
        if float(exp_acc) * total >= min_expected:
            observed_bins.append(obs_acc)
            expected_bins.append(float(exp_acc) * total)
            obs_acc, exp_acc = 0, Fraction(0)
    tail_obs = obs_acc + sum(c for k, c in histogram.items() if k > len(probs))
    tail_exp = float(exp_acc + 1 - sum(probs, Fraction(0))) * total
    if expected_bins and tail_exp < min_expected:
        observed_bins[-1] += tail_obs
        expected_bins[-1] += tail_exp
    else:
        observed_bins.append(tail_obs)
        expected_bins.append(tail_exp)
    obs = np.array(observed_bins, dtype=np.float64)
    exp = np.array(expected_bins, dtype=np.float64)
    statistic = float(np.sum((obs - exp) ** 2 / exp))
    dof = len(obs) - 1
    p_value = float(stats.chi2.sf(statistic, dof)) if dof > 0 else 1.0
    return statistic, dof, p_value
