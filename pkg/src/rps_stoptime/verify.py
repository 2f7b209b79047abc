"""Exact invariant sweep over ``n = 2..n_max``; the CI tripwire behind ``verify``."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import game_model
from .asymptotics import bounds
from .exactmath import SingularMatrixError
from .game_model import build_truncated_chain
from .markov_analysis import absorption_from_chain, mean_from_chain
from .recurrence import mean_by_closed_form, mean_by_recurrence

__all__ = ["CheckFailure", "VerificationSummary", "run_checks"]


@dataclass
class CheckFailure:
    invariant: str
    n: int
    detail: str


@dataclass
class VerificationSummary:
    n_max: int
    values_checked: int = 0
    checks_run: int = 0
    failures: list[CheckFailure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        first = self.failures[0] if self.failures else None
        return {
            "passed": self.passed,
            "n_max": self.n_max,
            "values_checked": self.values_checked,
            "checks_run": self.checks_run,
            "first_failure": None if first is None else vars(first),
            "failures": [vars(f) for f in self.failures],
        }


def run_checks(n_max: int, prob=None) -> VerificationSummary:
    """Check row sums, total mass, three-way mean agreement and the growth sandwich.

    ``prob`` replaces the one-round kernel ``p(i, j)`` in the matrix path only,
    so a corrupted kernel shows up as a named failure.
    """
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    p = prob or game_model.survival_probability
    summary = VerificationSummary(n_max=n_max)

    def check(name: str, n: int, ok: bool, detail: str) -> None:
        summary.checks_run += 1
        if not ok:
            summary.failures.append(CheckFailure(name, n, detail))

    for n in range(2, n_max + 1):
        summary.values_checked += 1
        row_sum = sum((Fraction(p(n, j)) for j in range(1, n + 1)), Fraction(0))
        check("row_stochastic", n, row_sum == 1, f"sum of p({n}, j) = {row_sum}")

        chain = build_truncated_chain(n, prob=p)
        try:
            mass = absorption_from_chain(chain)
            by_matrix = mean_from_chain(chain)
        except SingularMatrixError as exc:
            check("normalization", n, False, str(exc))
            continue
        check("normalization", n, mass == 1, f"total mass {mass}")

        by_recurrence = mean_by_recurrence(n)
        by_closed_form = mean_by_closed_form(n)
        check(
            "cross_method",
            n,
            by_recurrence == by_closed_form == by_matrix,
            f"recurrence {by_recurrence}, closed-form {by_closed_form}, matrix {by_matrix}",
        )

        lower, upper = bounds(n)
        check("growth_sandwich", n, lower <= by_recurrence <= upper, f"{lower} <= {by_recurrence} <= {upper}")
    return summary
