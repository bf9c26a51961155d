"""Core domain types, normalization and efficiency metrics."""

from src.core.errors import (
    AllocationError,
    DomainError,
    EmptyInstance,
    InputError,
    NonPositiveDemand,
    ShapeMismatch,
    WrongArity,
)
from src.core.model import (
    Allocation,
    GroupPartition,
    Instance,
    dominant_resources,
    envy_coefficients,
    exhausted_resources,
    largest_group,
    normalize,
    orient_two_resource,
    partition,
    social_welfare,
    utilities,
    utility,
    utilization,
)
from src.core.settings import resolve_eps

__all__ = [
    "Allocation",
    "AllocationError",
    "DomainError",
    "EmptyInstance",
    "GroupPartition",
    "InputError",
    "Instance",
    "NonPositiveDemand",
    "ShapeMismatch",
    "WrongArity",
    "dominant_resources",
    "envy_coefficients",
    "exhausted_resources",
    "largest_group",
    "normalize",
    "orient_two_resource",
    "partition",
    "resolve_eps",
    "social_welfare",
    "utilities",
    "utility",
    "utilization",
]
