"""Exact stopping-time law of the n-player Rock-Paper-Scissors elimination game."""

from .asymptotics import asymptotic_report, bounds, remainder_exact, remainder_series
from .game_model import build_truncated_chain, survival_probability, transition_row
from .markov_analysis import (
    exit_time_mean,
    exit_time_pmf,
    mean_by_matrix,
    mgf,
    pmf_table,
    stopping_time_pmf,
    variance,
)
from .recurrence import h_coefficients, mean_by_closed_form, mean_by_recurrence
from .simulator import estimate

__version__ = "0.1.0"
