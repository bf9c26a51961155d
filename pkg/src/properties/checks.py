"""Share incentive, envy-freeness, Pareto optimality and non-wastefulness checks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.core.errors import NotNonWasteful, ShapeMismatch
from src.core.model import Allocation, Instance, utilities
from src.core.settings import resolve_eps


@dataclass(frozen=True)
class SiReport:
    passed: bool
    worst_agent: int | None
    shortfall: float


@dataclass(frozen=True)
class EnvyPair:
    envious: int
    envied: int
    magnitude: float


@dataclass(frozen=True)
class EfReport:
    passed: bool
    envy_pairs: tuple[EnvyPair, ...]


@dataclass(frozen=True)
class PoReport:
    passed: bool
    max_column_sum: float


@dataclass(frozen=True)
class NonWastefulReport:
    passed: bool
    worst_deviation: float


@dataclass(frozen=True)
class PropertyReport:
    si: SiReport
    ef: EfReport
    po: PoReport
    non_wasteful: NonWastefulReport

    @property
    def passed(self) -> bool:
        return self.si.passed and self.ef.passed and self.po.passed and self.non_wasteful.passed

    def failures(self) -> list[str]:
        names = []
        for name, part in (("si", self.si), ("ef", self.ef), ("po", self.po), ("non_wasteful", self.non_wasteful)):
            if not part.passed:
                names.append(name)
        return names


def _check_shapes(allocation: Allocation, instance: Instance) -> None:
    if allocation.matrix.shape != instance.demands.shape:
        raise ShapeMismatch(f"allocation {allocation.matrix.shape} does not match instance {instance.demands.shape}")


def check_si(
    allocation: Allocation,
    instance: Instance,
    n: int | None = None,
    eps: float | None = None,
) -> SiReport:
    _check_shapes(allocation, instance)
    tol = resolve_eps(eps)
    agents = instance.n if n is None else n
    values = utilities(allocation, instance)
    worst = int(np.argmin(values))
    shortfall = max(0.0, 1.0 / agents - float(values[worst]))
    passed = float(values[worst]) >= 1.0 / agents - tol
    return SiReport(passed=passed, worst_agent=worst if shortfall > 0.0 else None, shortfall=shortfall)


def envy_matrix(allocation: Allocation, instance: Instance) -> np.ndarray:
    """u[i, j] - u[i, i] where u[i, j] = min_r A_jr / d_ir."""
    _check_shapes(allocation, instance)
    cross = np.min(allocation.matrix[None, :, :] / instance.demands[:, None, :], axis=2)
    return cross - np.diag(cross)[:, None]


def check_ef(allocation: Allocation, instance: Instance, eps: float | None = None) -> EfReport:
    tol = resolve_eps(eps)
    envy = envy_matrix(allocation, instance)
    np.fill_diagonal(envy, 0.0)
    rows, cols = np.nonzero(envy > tol)
    pairs = tuple(
        EnvyPair(envious=int(i), envied=int(j), magnitude=float(envy[i, j]))
        for i, j in zip(rows, cols)
    )
    return EfReport(passed=not pairs, envy_pairs=pairs)


def check_nonwasteful(allocation: Allocation, instance: Instance, eps: float | None = None) -> NonWastefulReport:
    _check_shapes(allocation, instance)
    tol = resolve_eps(eps)
    expected = allocation.shares[:, None] * instance.demands
    deviation = float(np.abs(allocation.matrix - expected).max())
    return NonWastefulReport(passed=deviation <= tol, worst_deviation=deviation)


def check_po(allocation: Allocation, instance: Instance, eps: float | None = None) -> PoReport:
    """Some resource used up; only meaningful for non-wasteful allocations."""
    tol = resolve_eps(eps)
    waste = check_nonwasteful(allocation, instance, tol)
    if not waste.passed:
        raise NotNonWasteful(f"allocation deviates from y*d by {waste.worst_deviation:.3g}")
    top = allocation.max_column_sum
    return PoReport(passed=top >= 1.0 - tol, max_column_sum=top)


def check_feasible(allocation: Allocation, eps: float | None = None) -> bool:
    return allocation.max_column_sum <= 1.0 + resolve_eps(eps)


def verify_allocation(allocation: Allocation, instance: Instance, eps: float | None = None) -> PropertyReport:
    tol = resolve_eps(eps)
    waste = check_nonwasteful(allocation, instance, tol)
    if waste.passed:
        po = check_po(allocation, instance, tol)
    else:
        po = PoReport(passed=False, max_column_sum=allocation.max_column_sum)
    return PropertyReport(
        si=check_si(allocation, instance, eps=tol),
        ef=check_ef(allocation, instance, tol),
        po=po,
        non_wasteful=waste,
    )
