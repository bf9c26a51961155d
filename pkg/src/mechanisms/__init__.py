"""Allocation mechanisms and the tag registry used by the command line."""

from __future__ import annotations

from src.core.errors import WrongArity
from src.core.model import Instance, orient_two_resource
from src.mechanisms.base import Mechanism, MechanismResult, StepRound, restore_orientation
from src.mechanisms.drf import drf, drf_share
from src.mechanisms.family import (
    CoordinateScore,
    DominantShareScore,
    LinearScore,
    check_monotone,
    f_g,
    generalized_f1,
    parse_score,
)
from src.mechanisms.hybrid import hybrid_guarantees, hybrid_sw, hybrid_util
from src.mechanisms.two_resource import StepQuantities, f1, f2, f2star, step_quantities

MECHANISM_TAGS = ("drf", "f1", "f2", "f2star", "fg", "gf1", "hybrid-sw", "hybrid-util")
TWO_RESOURCE_TAGS = frozenset({"f1", "f2", "f2star", "hybrid-sw", "hybrid-util"})

_REGISTRY: dict[str, Mechanism] = {
    "drf": drf,
    "f1": f1,
    "f2": f2,
    "f2star": f2star,
    "gf1": generalized_f1,
    "hybrid-sw": hybrid_sw,
    "hybrid-util": hybrid_util,
}


def resolve_mechanism(tag: str, m: int, score_spec: str | None = None) -> Mechanism:
    """Return a callable ``instance -> MechanismResult`` for a command-line tag."""
    key = tag.strip().lower()
    if key == "fg":
        score = parse_score(score_spec or "coord:1", m)

        def run_fg(instance: Instance, eps: float | None = None) -> MechanismResult:
            return f_g(instance, score, eps=eps, name="fg")

        return run_fg
    if key not in _REGISTRY:
        raise WrongArity(f"unknown mechanism {tag!r}; expected one of {', '.join(MECHANISM_TAGS)}")
    return _REGISTRY[key]


def run_oriented(mechanism: Mechanism, instance: Instance, eps: float | None = None) -> MechanismResult:
    """Run a two-resource mechanism with resource 1 dominating at least half the agents.

    The result is reported on the caller's column order.
    """
    oriented, swapped = orient_two_resource(instance)
    return restore_orientation(mechanism(oriented, eps=eps), swapped)


def run_tag(
    tag: str,
    instance: Instance,
    score_spec: str | None = None,
    eps: float | None = None,
    orient: bool = True,
) -> MechanismResult:
    key = tag.strip().lower()
    mechanism = resolve_mechanism(key, instance.m, score_spec)
    if orient and key in TWO_RESOURCE_TAGS and instance.m == 2:
        return run_oriented(mechanism, instance, eps=eps)
    return mechanism(instance, eps=eps)


__all__ = [
    "CoordinateScore",
    "DominantShareScore",
    "LinearScore",
    "MECHANISM_TAGS",
    "Mechanism",
    "MechanismResult",
    "StepQuantities",
    "StepRound",
    "TWO_RESOURCE_TAGS",
    "check_monotone",
    "drf",
    "drf_share",
    "f1",
    "f2",
    "f2star",
    "f_g",
    "generalized_f1",
    "hybrid_guarantees",
    "hybrid_sw",
    "hybrid_util",
    "parse_score",
    "resolve_mechanism",
    "restore_orientation",
    "run_oriented",
    "run_tag",
    "step_quantities",
]
