"""Shared result types and step-1 helpers for every mechanism."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from src.core.errors import WrongArity
from src.core.model import Allocation, Instance, exhausted_resources, social_welfare, utilization
from src.core.settings import resolve_eps

logger = logging.getLogger(__name__)

BINDING_LEVEL = "level"
BINDING_CAPACITY = "capacity"
BINDING_STALL = "stall"


@dataclass(frozen=True)
class StepRound:
    """One step-2 round: the frontier(s) raised and the step taken."""

    frontier: tuple[tuple[int, ...], ...]
    steps: tuple[float, ...]
    binding: str


@dataclass(frozen=True)
class MechanismResult:
    mechanism: str
    instance: Instance
    allocation: Allocation
    exhausted: frozenset[int]
    trace: tuple[StepRound, ...] = field(default_factory=tuple)
    branch: str | None = None
    score: str | None = None

    @property
    def shares(self) -> np.ndarray:
        return self.allocation.shares

    @property
    def max_column_sum(self) -> float:
        return self.allocation.max_column_sum

    @property
    def social_welfare(self) -> float:
        return social_welfare(self.allocation, self.instance)

    @property
    def utilization(self) -> float:
        return utilization(self.allocation)

    def relabeled(self, mechanism: str, branch: str | None) -> "MechanismResult":
        return replace(self, mechanism=mechanism, branch=branch)


Mechanism = Callable[..., MechanismResult]


def require_two_resources(instance: Instance, name: str) -> None:
    if instance.m != 2:
        raise WrongArity(f"{name} is defined for exactly 2 resources, got m={instance.m}")


def equal_split(instance: Instance) -> np.ndarray:
    return np.full(instance.n, 1.0 / instance.n)


def remaining_capacity(shares: np.ndarray, instance: Instance) -> np.ndarray:
    return 1.0 - (shares[:, None] * instance.demands).sum(axis=0)


def round_cap(instance: Instance) -> int:
    # Frontiers only grow, so n rounds suffice; the slack covers float ties.
    return 4 * instance.n + 16


def finish(
    name: str,
    instance: Instance,
    shares: np.ndarray,
    trace: list[StepRound] | tuple[StepRound, ...] = (),
    eps: float | None = None,
) -> MechanismResult:
    allocation = Allocation.from_shares(shares, instance)
    tol = resolve_eps(eps)
    exhausted = exhausted_resources(allocation, tol)
    if not exhausted:
        logger.debug("%s finished with no exhausted resource; max column sum %.12g", name, allocation.max_column_sum)
    return MechanismResult(
        mechanism=name,
        instance=instance,
        allocation=allocation,
        exhausted=exhausted,
        trace=tuple(trace),
    )


def next_level_gap(levels: np.ndarray, frontier: np.ndarray, level: float, eps: float) -> float:
    """Distance from ``level`` to the lowest level strictly above it outside the frontier."""
    outside = levels[~frontier]
    above = outside[outside > level + eps]
    if above.size == 0:
        return float("inf")
    return float(above.min() - level)


def restore_orientation(result: MechanismResult, swapped: bool) -> MechanismResult:
    """Undo a two-resource column swap; dominant shares are unaffected."""
    if not swapped:
        return result
    original = Instance(result.instance.demands[:, ::-1].copy())
    return replace(
        result,
        instance=original,
        allocation=result.allocation.swapped(),
        exhausted=frozenset(1 - r for r in result.exhausted),
    )
