"""Optimal fair benchmark oracle, fair ratios and closed-form guarantees."""

from src.fairopt.benchmark import (
    FairBenchmark,
    FairRatio,
    compute_benchmark,
    fair_ratio,
    max_fair_sw,
    max_fair_util,
)
from src.fairopt.bounds import TheoreticalBounds, ratio_curve, theoretical_ratios
from src.fairopt.simplex import LinearProgram, LPSolution, solve_lp

__all__ = [
    "FairBenchmark",
    "FairRatio",
    "LPSolution",
    "LinearProgram",
    "TheoreticalBounds",
    "compute_benchmark",
    "fair_ratio",
    "max_fair_sw",
    "max_fair_util",
    "ratio_curve",
    "solve_lp",
    "theoretical_ratios",
]
