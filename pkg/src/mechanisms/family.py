"""Water-filling mechanisms parameterized by a monotone score of a bundle.

Every member starts from the equal split and repeatedly scales up the bundles
of the agents whose score is lowest until they reach the next score level or a
resource runs out. Scores of the form ``offset + lam * unit(bundle)`` under
scaling by ``lam`` get a closed-form step; any other strictly monotone callable
falls back to bisection.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from src.core.errors import BadParams, NonMonotoneScore, ShapeMismatch, WrongArity
from src.core.model import Instance, largest_group
from src.core.settings import resolve_eps
from src.mechanisms.base import (
    BINDING_CAPACITY,
    BINDING_LEVEL,
    MechanismResult,
    StepRound,
    equal_split,
    finish,
    remaining_capacity,
    round_cap,
)

logger = logging.getLogger(__name__)

ScoreFunction = Callable[[np.ndarray], float]

BISECTION_TOL = 1e-12
BISECTION_MAX_ITER = 200
MONOTONE_SAMPLES = 32


class HomogeneousScore(ABC):
    """Score with g(lam * v) = offset + lam * unit(v) for lam >= 0."""

    offset: float = 0.0

    @abstractmethod
    def unit(self, bundles: np.ndarray) -> np.ndarray:
        """Scores of the rows of ``bundles`` without the offset."""

    def __call__(self, vector: np.ndarray) -> float:
        return float(self.offset + self.unit(np.asarray(vector, dtype=float)[None, :])[0])

    @property
    @abstractmethod
    def label(self) -> str:
        """Command-line form accepted by ``parse_score``."""


@dataclass(frozen=True)
class CoordinateScore(HomogeneousScore):
    resource: int

    def unit(self, bundles: np.ndarray) -> np.ndarray:
        return bundles[:, self.resource]

    @property
    def label(self) -> str:
        return f"coord:{self.resource + 1}"


@dataclass(frozen=True)
class LinearScore(HomogeneousScore):
    weights: tuple[float, ...]
    offset: float = 0.0

    def __post_init__(self) -> None:
        if not self.weights or any(not w > 0.0 for w in self.weights):
            raise NonMonotoneScore(f"linear score weights must all be positive, got {self.weights}")

    def unit(self, bundles: np.ndarray) -> np.ndarray:
        if bundles.shape[1] != len(self.weights):
            raise ShapeMismatch(f"linear score has {len(self.weights)} weights for m={bundles.shape[1]}")
        return bundles @ np.asarray(self.weights, dtype=float)

    @property
    def label(self) -> str:
        return "linear:" + ",".join(repr(w) for w in self.weights)


@dataclass(frozen=True)
class DominantShareScore(HomogeneousScore):
    def unit(self, bundles: np.ndarray) -> np.ndarray:
        return bundles.max(axis=1)

    @property
    def label(self) -> str:
        return "dominant"


def parse_score(spec: str, m: int) -> HomogeneousScore:
    """Parse ``coord:<r>`` (1-based), ``linear:w1,...,wm`` or ``dominant``."""
    text = spec.strip().lower()
    if text == "dominant":
        return DominantShareScore()
    kind, _, rest = text.partition(":")
    if kind == "coord":
        try:
            resource = int(rest) - 1
        except ValueError:
            raise BadParams(f"bad coordinate score {spec!r}") from None
        if not 0 <= resource < m:
            raise WrongArity(f"coordinate score resource {resource + 1} outside 1..{m}")
        return CoordinateScore(resource)
    if kind == "linear":
        try:
            weights = tuple(float(part) for part in rest.split(","))
        except ValueError:
            raise BadParams(f"bad linear score {spec!r}") from None
        if len(weights) != m:
            raise WrongArity(f"linear score needs {m} weights, got {len(weights)}")
        return LinearScore(weights)
    raise BadParams(f"unknown score {spec!r}; use coord:<r>, linear:<w,...> or dominant")


def check_monotone(score: ScoreFunction, m: int, samples: int = MONOTONE_SAMPLES, seed: int = 0) -> None:
    """Sampled check that strictly larger bundles score strictly higher. Not a proof."""
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        base = rng.uniform(0.01, 0.9, size=m)
        bump = rng.uniform(1e-3, 0.1, size=m)
        low = float(score(base))
        high = float(score(base + bump))
        if not high > low:
            raise NonMonotoneScore(f"score not increasing between {base.tolist()} and {(base + bump).tolist()}")


def _score_values(score: ScoreFunction, bundles: np.ndarray) -> np.ndarray:
    if isinstance(score, HomogeneousScore):
        return score.offset + score.unit(bundles)
    return np.array([float(score(row)) for row in bundles])


def _closed_form_target(
    score: HomogeneousScore,
    bundles: np.ndarray,
    capacity: np.ndarray,
    ceiling: float,
) -> tuple[float, np.ndarray]:
    units = score.unit(bundles)
    slope = (bundles / units[:, None]).sum(axis=0)
    held = bundles.sum(axis=0)
    limits = score.offset + (capacity + held) / slope
    target = float(min(ceiling, limits.min()))
    scales = np.maximum(1.0, (target - score.offset) / units)
    return target, scales


def _scale_for_level(score: ScoreFunction, bundle: np.ndarray, target: float) -> float:
    upper = 1.0 / float(bundle.max())
    if float(score(bundle * upper)) < target:
        return upper
    lower = 1.0
    for _ in range(BISECTION_MAX_ITER):
        mid = 0.5 * (lower + upper)
        if float(score(bundle * mid)) < target:
            lower = mid
        else:
            upper = mid
        if upper - lower <= BISECTION_TOL:
            break
    return upper


def _bisection_target(
    score: ScoreFunction,
    bundles: np.ndarray,
    capacity: np.ndarray,
    level: float,
    ceiling: float,
) -> tuple[float, np.ndarray]:
    def scales_at(target: float) -> np.ndarray:
        return np.array([_scale_for_level(score, row, target) for row in bundles])

    def fits(scales: np.ndarray) -> bool:
        used = ((scales - 1.0)[:, None] * bundles).sum(axis=0)
        return bool(np.all(used <= capacity))

    top_scales = scales_at(ceiling)
    if fits(top_scales):
        return ceiling, top_scales
    low, high = level, ceiling
    for _ in range(BISECTION_MAX_ITER):
        if high - low <= BISECTION_TOL:
            break
        mid = 0.5 * (low + high)
        if fits(scales_at(mid)):
            low = mid
        else:
            high = mid
    return low, scales_at(low)


def f_g(
    instance: Instance,
    score: ScoreFunction,
    eps: float | None = None,
    name: str = "fg",
    check: bool = True,
) -> MechanismResult:
    tol = resolve_eps(eps)
    if check:
        check_monotone(score, instance.m)
    d = instance.demands
    shares = equal_split(instance)
    ceiling_all = float(score(np.ones(instance.m)))
    trace: list[StepRound] = []

    for _ in range(round_cap(instance)):
        capacity = remaining_capacity(shares, instance)
        if capacity.min() <= tol:
            break
        bundles = shares[:, None] * d
        values = _score_values(score, bundles)
        level = float(values.min())
        frontier = values <= level + tol
        above = values[~frontier]
        ceiling = float(above.min()) if above.size else ceiling_all

        if isinstance(score, HomogeneousScore):
            target, scales = _closed_form_target(score, bundles[frontier], capacity, ceiling)
        else:
            target, scales = _bisection_target(score, bundles[frontier], capacity, level, ceiling)

        shares[frontier] = shares[frontier] * scales
        binding = BINDING_LEVEL if target >= ceiling and above.size else BINDING_CAPACITY
        trace.append(
            StepRound(
                frontier=(tuple(int(i) for i in np.flatnonzero(frontier)),),
                steps=(target - level,),
                binding=binding,
            )
        )
        logger.debug("%s round %d: |P|=%d level %.6g -> %.6g (%s)", name, len(trace), frontier.sum(), level, target, binding)
        if binding == BINDING_CAPACITY and not isinstance(score, HomogeneousScore):
            break
    else:
        logger.warning("%s hit the round cap on an instance with n=%d", name, instance.n)

    label = score.label if isinstance(score, HomogeneousScore) else None
    return replace(finish(name, instance, shares, trace, tol), score=label)


def generalized_f1(
    instance: Instance,
    special: int | None = None,
    eps: float | None = None,
) -> MechanismResult:
    """Raise the agents holding the least of the special resource (default: largest group's)."""
    if instance.m < 2:
        raise WrongArity(f"gf1 needs at least 2 resources, got m={instance.m}")
    resource = largest_group(instance) if special is None else int(special)
    if not 0 <= resource < instance.m:
        raise WrongArity(f"special resource {resource + 1} outside 1..{instance.m}")
    return f_g(instance, CoordinateScore(resource), eps=eps, name="gf1", check=False)

