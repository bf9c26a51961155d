"""Grid search for profitable misreports.

A clean probe is evidence of strategyproofness on the searched grid, never a
proof: the property quantifies over every real-valued report.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from src.core.errors import AllocationError, BadParams, ManipulationProbeError
from src.core.model import Instance, utility
from src.core.settings import SP_TOLERANCE
from src.mechanisms.base import MechanismResult

DEFAULT_GRID_POINTS = 100

MechanismCall = Callable[[Instance], MechanismResult]


@dataclass(frozen=True)
class ManipulationFinding:
    agent: int
    false_demand: tuple[float, ...]
    truthful_utility: float
    manipulated_utility: float

    @property
    def gain(self) -> float:
        return self.manipulated_utility - self.truthful_utility


def demand_grid(m: int, points: int = DEFAULT_GRID_POINTS) -> list[tuple[float, ...]]:
    """Normalized vectors with one coordinate pinned at 1 and the rest on {1/k, ..., 1}."""
    if m < 2 or points < 1:
        raise BadParams(f"demand grid needs m >= 2 and points >= 1, got m={m}, points={points}")
    axis = [k / points for k in range(1, points + 1)]
    vectors: set[tuple[float, ...]] = set()
    for pinned in range(m):
        for rest in itertools.product(axis, repeat=m - 1):
            vector = list(rest)
            vector.insert(pinned, 1.0)
            vectors.add(tuple(vector))
    return sorted(vectors)


def sp_probe(
    mechanism: MechanismCall,
    instance: Instance,
    agent: int,
    grid: Iterable[Sequence[float]] | None = None,
    tolerance: float = SP_TOLERANCE,
) -> ManipulationFinding | None:
    vectors = [tuple(float(v) for v in vector) for vector in (grid if grid is not None else demand_grid(instance.m))]
    if not vectors:
        raise BadParams("manipulation grid is empty")
    if not 0 <= agent < instance.n:
        raise BadParams(f"agent {agent} outside 0..{instance.n - 1}")

    true_demand = instance.demands[agent]
    truthful = float(mechanism(instance).allocation.shares[agent])

    best: ManipulationFinding | None = None
    for vector in vectors:
        try:
            report = instance.with_row(agent, vector)
            result = mechanism(report)
        except AllocationError as exc:
            raise ManipulationProbeError(agent, vector, exc) from exc
        manipulated = utility(result.allocation.matrix[agent], true_demand)
        gain = manipulated - truthful
        if gain <= tolerance:
            continue
        if best is None or gain > best.gain or (gain == best.gain and vector < best.false_demand):
            best = ManipulationFinding(
                agent=agent,
                false_demand=vector,
                truthful_utility=truthful,
                manipulated_utility=manipulated,
            )
    return best


def probe_all_agents(
    mechanism: MechanismCall,
    instance: Instance,
    grid: Iterable[Sequence[float]] | None = None,
    tolerance: float = SP_TOLERANCE,
) -> ManipulationFinding | None:
    """Best finding over every agent; ties keep the lowest agent index."""
    vectors = list(grid) if grid is not None else demand_grid(instance.m)
    best: ManipulationFinding | None = None
    for agent in range(instance.n):
        finding = sp_probe(mechanism, instance, agent, vectors, tolerance)
        if finding is not None and (best is None or finding.gain > best.gain):
            best = finding
    return best

