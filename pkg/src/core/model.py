"""Domain types for Leontief multi-resource allocation.

Demands are stored as an ``n x m`` float matrix whose rows are normalized so
the dominant (largest) entry of every row is exactly 1. Allocations are always
carried together with their dominant-share vector ``y``; for non-wasteful
allocations the matrix is ``y[:, None] * demands``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.core.errors import EmptyInstance, NonPositiveDemand, ShapeMismatch
from src.core.settings import resolve_eps


def _readonly(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class Instance:
    demands: np.ndarray

    def __post_init__(self) -> None:
        demands = np.array(self.demands, dtype=float)
        if demands.ndim != 2 or demands.shape[0] < 1 or demands.shape[1] < 2:
            raise EmptyInstance(f"Instance needs n >= 1 agents and m >= 2 resources, got shape {demands.shape}")
        if not np.all(np.isfinite(demands)) or np.any(demands <= 0.0):
            raise NonPositiveDemand("Every demand must be a finite positive number.")
        if np.any(demands > 1.0) or np.any(demands.max(axis=1) != 1.0):
            raise NonPositiveDemand("Demand rows must be normalized (entries <= 1 with a maximum of exactly 1).")
        object.__setattr__(self, "demands", _readonly(demands))

    @property
    def n(self) -> int:
        return int(self.demands.shape[0])

    @property
    def m(self) -> int:
        return int(self.demands.shape[1])

    def with_row(self, agent: int, row: Sequence[float]) -> "Instance":
        demands = np.array(self.demands, dtype=float)
        demands[agent] = np.asarray(row, dtype=float)
        return Instance(demands)

    def rows(self) -> list[tuple[float, ...]]:
        return [tuple(float(v) for v in row) for row in self.demands]


@dataclass(frozen=True, eq=False)
class Allocation:
    shares: np.ndarray
    matrix: np.ndarray

    def __post_init__(self) -> None:
        shares = np.array(self.shares, dtype=float)
        matrix = np.array(self.matrix, dtype=float)
        if shares.ndim != 1 or matrix.ndim != 2 or matrix.shape[0] != shares.shape[0]:
            raise ShapeMismatch(f"shares {shares.shape} do not match matrix {matrix.shape}")
        object.__setattr__(self, "shares", _readonly(shares))
        object.__setattr__(self, "matrix", _readonly(matrix))

    @classmethod
    def from_shares(cls, shares: Sequence[float] | np.ndarray, instance: Instance) -> "Allocation":
        y = np.asarray(shares, dtype=float)
        if y.shape != (instance.n,):
            raise ShapeMismatch(f"expected {instance.n} shares, got shape {y.shape}")
        return cls(shares=y, matrix=y[:, None] * instance.demands)

    @classmethod
    def zeros(cls, instance: Instance) -> "Allocation":
        return cls.from_shares(np.zeros(instance.n), instance)

    @property
    def column_sums(self) -> np.ndarray:
        return self.matrix.sum(axis=0)

    @property
    def max_column_sum(self) -> float:
        return float(self.column_sums.max())

    def swapped(self) -> "Allocation":
        return Allocation(shares=self.shares.copy(), matrix=self.matrix[:, ::-1].copy())


@dataclass(frozen=True)
class GroupPartition:
    groups: tuple[tuple[int, ...], ...]
    special: int
    alpha: float
    beta: float | None

    @property
    def n(self) -> int:
        return sum(len(group) for group in self.groups)

    @property
    def degenerate(self) -> bool:
        """True when one side of the split is empty (alpha == 0)."""
        return self.alpha == 0.0

    @property
    def beta_defined(self) -> bool:
        return self.beta is not None

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(group) for group in self.groups)

    def members(self, resource: int) -> tuple[int, ...]:
        return self.groups[resource]


def normalize(raw: Sequence[Sequence[float]] | np.ndarray) -> Instance:
    values = np.array(raw, dtype=float)
    if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 2:
        raise EmptyInstance(f"Need at least one agent and two resources, got shape {values.shape}")
    if not np.all(np.isfinite(values)) or np.any(values <= 0.0):
        raise NonPositiveDemand("Every raw demand must be a finite positive number.")
    row_max = values.max(axis=1, keepdims=True)
    return Instance(values / row_max)


def utility(allocation_row: Sequence[float] | np.ndarray, demand: Sequence[float] | np.ndarray) -> float:
    row = np.asarray(allocation_row, dtype=float)
    d = np.asarray(demand, dtype=float)
    return float(np.min(row / d))


def utilities(allocation: Allocation, instance: Instance) -> np.ndarray:
    if allocation.matrix.shape != instance.demands.shape:
        raise ShapeMismatch(f"allocation {allocation.matrix.shape} vs instance {instance.demands.shape}")
    return np.min(allocation.matrix / instance.demands, axis=1)


def dominant_resources(instance: Instance) -> np.ndarray:
    # argmax returns the first maximum, which is the smallest-index tie rule.
    return np.argmax(instance.demands, axis=1)


def partition(instance: Instance, special: int = 0) -> GroupPartition:
    """Split agents by dominant resource.

    For two resources ``alpha`` is the size of the smaller group over ``n``; for
    three or more it is the fraction of agents outside the ``special`` group and
    ``beta`` is their average demand for the special resource.
    """
    if not 0 <= special < instance.m:
        raise ShapeMismatch(f"special resource {special} outside 0..{instance.m - 1}")
    dominant = dominant_resources(instance)
    groups = tuple(tuple(int(i) for i in np.flatnonzero(dominant == r)) for r in range(instance.m))
    n = instance.n

    if instance.m == 2:
        alpha = min(len(groups[0]), len(groups[1])) / n
        return GroupPartition(groups=groups, special=special, alpha=alpha, beta=None)

    outside = [i for i in range(n) if dominant[i] != special]
    alpha = len(outside) / n
    beta = None
    if outside:
        beta = float(instance.demands[outside, special].sum() / (n * alpha))
    return GroupPartition(groups=groups, special=special, alpha=alpha, beta=beta)


def largest_group(instance: Instance) -> int:
    counts = np.bincount(dominant_resources(instance), minlength=instance.m)
    return int(np.argmax(counts))


def social_welfare(allocation: Allocation, instance: Instance) -> float:
    return float(utilities(allocation, instance).sum())


def utilization(allocation: Allocation) -> float:
    return float(allocation.column_sums.min())


def envy_coefficients(instance: Instance) -> np.ndarray:
    """c[i, j] = min_r d_jr / d_ir, so agent i values y_j * d_j at y_j * c[i, j]."""
    d = instance.demands
    return np.min(d[None, :, :] / d[:, None, :], axis=2)


def orient_two_resource(instance: Instance) -> tuple[Instance, bool]:
    """Swap the two columns when resource 1 dominates fewer agents than resource 2."""
    if instance.m != 2:
        return instance, False
    dominant = dominant_resources(instance)
    n1 = int(np.count_nonzero(dominant == 0))
    if n1 >= instance.n - n1:
        return instance, False
    return Instance(instance.demands[:, ::-1].copy()), True


def exhausted_resources(allocation: Allocation, eps: float | None = None) -> frozenset[int]:
    tol = resolve_eps(eps)
    sums = allocation.column_sums
    return frozenset(int(r) for r in np.flatnonzero(sums >= 1.0 - tol))
