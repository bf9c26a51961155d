"""Dominant Resource Fairness in closed form."""

from __future__ import annotations

import numpy as np

from src.core.model import Instance
from src.mechanisms.base import BINDING_CAPACITY, MechanismResult, StepRound, finish

MECHANISM_NAME = "drf"


def drf_share(instance: Instance) -> float:
    """x* = 1 / max_r sum_i d_ir."""
    return float(1.0 / instance.demands.sum(axis=0).max())


def drf(instance: Instance, eps: float | None = None) -> MechanismResult:
    x_star = drf_share(instance)
    shares = np.full(instance.n, x_star)
    trace = [
        StepRound(
            frontier=(tuple(range(instance.n)),),
            steps=(x_star - 1.0 / instance.n,),
            binding=BINDING_CAPACITY,
        )
    ]
    return finish(MECHANISM_NAME, instance, shares, trace, eps)
