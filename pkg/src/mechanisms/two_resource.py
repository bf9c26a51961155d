"""Two-resource mechanisms that improve on DRF while staying fair.

All three start from the equal split (every agent holds dominant share 1/n).
``f1`` then water-fills the resource-1 fraction of the agents dominant on
resource 2. ``f2`` and ``f2star`` raise both groups at once, coupling the two
frontiers so the dominant-share increments of the groups keep a fixed ratio:
the step-1 remainders R1/R2 for ``f2`` and the starred remainders for
``f2star``. Only ``f1`` and ``f2star`` are strategyproof.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from src.core.model import Instance
from src.core.settings import resolve_eps
from src.mechanisms.base import (
    BINDING_CAPACITY,
    BINDING_LEVEL,
    BINDING_STALL,
    MechanismResult,
    StepRound,
    equal_split,
    finish,
    next_level_gap,
    remaining_capacity,
    require_two_resources,
    round_cap,
)
from src.mechanisms.drf import drf_share

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StepQuantities:
    r1: float
    r2: float
    r1_star: float
    r2_star: float
    delta_s1: float
    delta_s2: float
    c1: float
    c2: float
    p1: tuple[int, ...]
    p2: tuple[int, ...]
    d1: float
    d2: float


def _group_masks(instance: Instance) -> tuple[np.ndarray, np.ndarray]:
    g1 = instance.demands[:, 0] == 1.0
    return g1, ~g1


def f1(instance: Instance, eps: float | None = None) -> MechanismResult:
    require_two_resources(instance, "f1")
    tol = resolve_eps(eps)
    d = instance.demands
    shares = equal_split(instance)
    _, g2 = _group_masks(instance)
    trace: list[StepRound] = []

    for _ in range(round_cap(instance)):
        c = remaining_capacity(shares, instance)
        if c.min() <= tol or not g2.any():
            break
        levels = shares * d[:, 0]
        level = float(levels[g2].min())
        frontier = g2 & (levels <= level + tol)

        delta0 = next_level_gap(levels, frontier, level, tol)
        delta1 = float(c[0] / np.count_nonzero(frontier))
        delta2 = float(c[1] / np.sum(1.0 / d[frontier, 0]))
        delta = min(delta0, delta1, delta2)

        target = level + delta
        shares[frontier] = np.maximum(shares[frontier], target / d[frontier, 0])
        binding = BINDING_LEVEL if delta0 < min(delta1, delta2) else BINDING_CAPACITY
        trace.append(
            StepRound(
                frontier=(tuple(int(i) for i in np.flatnonzero(frontier)),),
                steps=(delta,),
                binding=binding,
            )
        )
        logger.debug("f1 round %d: |P|=%d delta=%.6g (%s)", len(trace), np.count_nonzero(frontier), delta, binding)
    else:
        logger.warning("f1 hit the round cap on an instance with n=%d", instance.n)

    return finish("f1", instance, shares, trace, tol)


def _coupled_fill(
    instance: Instance,
    starred: bool,
    eps: float | None,
) -> tuple[np.ndarray, list[StepRound], StepQuantities | None]:
    tol = resolve_eps(eps)
    d = instance.demands
    n = instance.n
    shares = equal_split(instance)
    g1, g2 = _group_masks(instance)

    r1, r2 = (float(v) for v in remaining_capacity(shares, instance))
    if r1 <= tol or r2 <= tol:
        return shares, [], None
    if not g1.any() or not g2.any():
        return np.full(n, drf_share(instance)), [], None

    r1_star = r1 + float(d[g2, 0].min()) / n
    r2_star = r2 + float(d[g1, 1].min()) / n
    rho = r1_star / r2_star if starred else r1 / r2

    trace: list[StepRound] = []
    delta_s1 = 0.0
    delta_s2 = 0.0
    p1 = p2 = np.zeros(n, dtype=bool)
    big_d1 = big_d2 = 0.0
    c = np.array([r1, r2])

    for _ in range(round_cap(instance)):
        c = remaining_capacity(shares, instance)
        if c.min() <= tol:
            break
        levels1 = shares * d[:, 1]
        levels2 = shares * d[:, 0]
        low1 = float(levels1[g1].min())
        low2 = float(levels2[g2].min())
        p1 = g1 & (levels1 <= low1 + tol)
        p2 = g2 & (levels2 <= low2 + tol)
        big_d1 = float(np.sum(1.0 / d[p1, 1]))
        big_d2 = float(np.sum(1.0 / d[p2, 0]))

        cap1 = float(c[1] / (np.count_nonzero(p1) + big_d1 / rho))
        cap2 = float(c[0] / (np.count_nonzero(p2) + big_d2 * rho))
        step1 = min(next_level_gap(levels1, p1, low1, tol), cap1)
        step2 = min(next_level_gap(levels2, p2, low2, tol), cap2)

        # Keep the dominant-share increments of the two groups in ratio rho.
        if step1 * big_d1 <= rho * step2 * big_d2:
            step2 = step1 * big_d1 / (big_d2 * rho)
        else:
            step1 = step2 * big_d2 * rho / big_d1

        if step1 <= 0.0 and step2 <= 0.0:
            trace.append(StepRound(frontier=(), steps=(0.0, 0.0), binding=BINDING_STALL))
            logger.debug("coupled fill stalled with remaining capacity %s", c)
            break

        shares[p1] = np.maximum(shares[p1], (low1 + step1) / d[p1, 1])
        shares[p2] = np.maximum(shares[p2], (low2 + step2) / d[p2, 0])
        delta_s1 += step1 * big_d1
        delta_s2 += step2 * big_d2

        binding = BINDING_CAPACITY if step1 >= cap1 or step2 >= cap2 else BINDING_LEVEL
        trace.append(
            StepRound(
                frontier=(
                    tuple(int(i) for i in np.flatnonzero(p1)),
                    tuple(int(i) for i in np.flatnonzero(p2)),
                ),
                steps=(step1, step2),
                binding=binding,
            )
        )
    else:
        logger.warning("coupled fill hit the round cap on an instance with n=%d", n)

    c = remaining_capacity(shares, instance)
    quantities = StepQuantities(
        r1=r1,
        r2=r2,
        r1_star=r1_star,
        r2_star=r2_star,
        delta_s1=delta_s1,
        delta_s2=delta_s2,
        c1=float(c[0]),
        c2=float(c[1]),
        p1=tuple(int(i) for i in np.flatnonzero(p1)),
        p2=tuple(int(i) for i in np.flatnonzero(p2)),
        d1=big_d1,
        d2=big_d2,
    )
    return shares, trace, quantities


def step_quantities(instance: Instance, starred: bool = False, eps: float | None = None) -> StepQuantities | None:
    """Final internals of the coupled fill, or None when step 2 never ran."""
    require_two_resources(instance, "f2star" if starred else "f2")
    _, _, quantities = _coupled_fill(instance, starred, eps)
    return quantities


def f2(instance: Instance, eps: float | None = None) -> MechanismResult:
    require_two_resources(instance, "f2")
    shares, trace, _ = _coupled_fill(instance, starred=False, eps=eps)
    return finish("f2", instance, shares, trace, eps)


def f2star(instance: Instance, eps: float | None = None) -> MechanismResult:
    require_two_resources(instance, "f2star")
    shares, trace, _ = _coupled_fill(instance, starred=True, eps=eps)
    return finish("f2star", instance, shares, trace, eps)
