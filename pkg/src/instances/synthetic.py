"""Seeded random instances with a controlled minor-group fraction (and beta for m >= 3)."""

from __future__ import annotations

import math

import numpy as np

from src.core.errors import BadAlpha, BadParams
from src.core.model import Instance

GRID_STEPS = 100


def minor_count(n: int, alpha: float) -> int:
    """Round n * alpha half up."""
    return int(math.floor(n * alpha + 0.5))


def derive_seed(master_seed: int, point_index: int, trial_index: int) -> int:
    """Independent per-trial seed from (master, point, trial)."""
    sequence = np.random.SeedSequence([int(master_seed), int(point_index), int(trial_index)])
    return int(sequence.generate_state(1, dtype=np.uint32)[0])


def _grid_draw(rng: np.random.Generator, low: int, high: int, size: int | tuple[int, ...]) -> np.ndarray:
    """Uniform draws from {low/100, ..., high/100}."""
    return rng.integers(low, high + 1, size=size) / GRID_STEPS


def gen_alpha(n: int, alpha: float, seed: int) -> Instance:
    """Two-resource instance: n(1-alpha) agents dominant on resource 1, the rest on resource 2.

    Non-dominant demands come from the 0.01 grid. Minor-group agents draw from
    {0.01, ..., 0.99} so a tie (1, 1) never moves them into the other group.
    """
    if not 0.0 < alpha <= 0.5:
        raise BadAlpha(f"alpha must lie in (0, 1/2], got {alpha}")
    n_minor = minor_count(n, alpha)
    if n_minor < 1:
        raise BadAlpha(f"n * alpha rounds to zero minor agents (n={n}, alpha={alpha})")
    n_major = n - n_minor
    rng = np.random.default_rng(seed)

    major = np.ones((n_major, 2))
    major[:, 1] = _grid_draw(rng, 1, GRID_STEPS, n_major)
    minor = np.ones((n_minor, 2))
    minor[:, 0] = _grid_draw(rng, 1, GRID_STEPS - 1, n_minor)
    return Instance(np.vstack([major, minor]))


def gen_alpha_beta(n: int, m: int, alpha: float, beta: float, seed: int) -> Instance:
    """m-resource instance with a special group on resource 1 and mixture-drawn non-dominant demands.

    Non-dominant entries come from (1 - beta) * U{0.01..beta} + beta * U{beta+0.01..0.99},
    whose mean is close to beta.
    """
    if m < 3:
        raise BadParams(f"gen_alpha_beta needs m >= 3, got m={m}")
    if not 0.0 < alpha < 1.0 or not 0.0 < beta < 1.0:
        raise BadParams(f"alpha and beta must lie in (0, 1), got alpha={alpha}, beta={beta}")
    beta_step = int(round(beta * GRID_STEPS))
    if not 1 <= beta_step <= GRID_STEPS - 2:
        raise BadParams(f"beta={beta} leaves an empty side of the demand mixture")
    n_minor = minor_count(n, alpha)
    if not 1 <= n_minor <= n - 1:
        raise BadParams(f"alpha={alpha} with n={n} leaves an empty group")

    rng = np.random.default_rng(seed)
    dominant = np.zeros(n, dtype=int)
    dominant[n - n_minor :] = rng.integers(1, m, size=n_minor)

    low_side = rng.random((n, m)) < (1.0 - beta)
    low = _grid_draw(rng, 1, beta_step, (n, m))
    high = _grid_draw(rng, beta_step + 1, GRID_STEPS - 1, (n, m))
    demands = np.where(low_side, low, high)
    demands[np.arange(n), dominant] = 1.0
    return Instance(demands)
