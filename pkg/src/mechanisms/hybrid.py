"""Switch between f1 and f2star on the minor-group fraction alpha."""

from __future__ import annotations

import math

from src.core.model import Instance, partition
from src.mechanisms.base import MechanismResult, require_two_resources
from src.mechanisms.two_resource import f1, f2star


def sw_threshold(n: int) -> float:
    return 2.0 - math.sqrt(3.0) + 1.0 / (2.0 * n)


def util_threshold(n: int) -> float:
    return 1.0 / 3.0 + 1.0 / (3.0 * n)


def hybrid_guarantees(n: int) -> tuple[float, float]:
    """Fair-ratio guarantees of the SW and utilization hybrids."""
    return 3.0 - math.sqrt(3.0) + 1.0 / (2.0 * n), 3.0 / (2.0 - 1.0 / n)


def _dispatch(instance: Instance, threshold: float, name: str, eps: float | None) -> MechanismResult:
    alpha = partition(instance).alpha
    if alpha <= threshold:
        return f1(instance, eps=eps).relabeled(name, "f1")
    return f2star(instance, eps=eps).relabeled(name, "f2star")


def hybrid_sw(instance: Instance, eps: float | None = None) -> MechanismResult:
    require_two_resources(instance, "hybrid-sw")
    return _dispatch(instance, sw_threshold(instance.n), "hybrid-sw", eps)


def hybrid_util(instance: Instance, eps: float | None = None) -> MechanismResult:
    require_two_resources(instance, "hybrid-util")
    return _dispatch(instance, util_threshold(instance.n), "hybrid-util", eps)
