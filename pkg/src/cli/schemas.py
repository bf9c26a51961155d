"""Pydantic models for command-line records and sweep configuration."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.core.errors import BadParams
from src.instances import canonical_kind
from src.mechanisms import MECHANISM_TAGS

BASE_COLUMNS = (
    "trial_id",
    "point_id",
    "generator",
    "n",
    "m",
    "alpha_requested",
    "beta_requested",
    "seed",
    "alpha_realized",
    "beta_realized",
    "sw_opt",
    "util_opt",
)
MECHANISM_FIELDS = ("sw", "util", "sw_ratio", "util_ratio", "sw_bound", "util_bound", "branch", "score")
TEXT_FIELDS = frozenset({"branch", "score"})


def sweep_columns(mechanisms: tuple[str, ...] | list[str]) -> list[str]:
    columns = list(BASE_COLUMNS)
    for tag in mechanisms:
        columns.extend(f"{tag}_{name}" for name in MECHANISM_FIELDS)
    return columns


class SolveRecord(BaseModel):
    mechanism: str
    branch: Optional[str] = None
    score: Optional[str] = Field(default=None, description="score of an fg or gf1 run, in --g form")
    n: int
    m: int
    shares: list[float]
    allocation: list[list[float]]
    social_welfare: float
    utilization: float
    max_column_sum: float
    exhausted: list[int] = Field(description="1-based indices of resources used up")


class CheckRecord(BaseModel):
    passed: bool
    detail: dict[str, Any] = Field(default_factory=dict)


class FindingRecord(BaseModel):
    agent: int = Field(description="1-based agent index")
    false_demand: list[float]
    truthful_utility: float
    manipulated_utility: float
    gain: float


class VerifyRecord(BaseModel):
    mechanism: str
    passed: bool
    si: CheckRecord
    ef: CheckRecord
    po: CheckRecord
    non_wasteful: CheckRecord
    sp_grid: Optional[int] = None
    manipulation: Optional[FindingRecord] = None


class MechanismOutcome(BaseModel):
    sw: float
    util: float
    sw_ratio: float
    util_ratio: float
    sw_bound: Optional[float] = None
    util_bound: Optional[float] = None
    branch: Optional[str] = None
    score: Optional[str] = None


class ExperimentRecord(BaseModel):
    trial_id: int
    point_id: int
    generator: str
    n: int
    m: int
    alpha_requested: Optional[float] = None
    beta_requested: Optional[float] = None
    seed: int
    alpha_realized: float
    beta_realized: Optional[float] = None
    sw_opt: float
    util_opt: float
    mechanisms: dict[str, MechanismOutcome]

    def to_row(self) -> dict[str, object]:
        row: dict[str, object] = {column: getattr(self, column) for column in BASE_COLUMNS}
        for tag, outcome in self.mechanisms.items():
            for name in MECHANISM_FIELDS:
                row[f"{tag}_{name}"] = getattr(outcome, name)
        return row


class SweepConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    generator: str
    n: list[int] = Field(min_length=1)
    m: int = Field(default=2, ge=2)
    alpha: list[float] = Field(default_factory=list)
    beta: list[float] = Field(default_factory=list)
    trials: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0)
    mechanisms: list[str] = Field(default_factory=lambda: ["drf"], min_length=1)
    trace_path: Optional[Path] = None
    g: Optional[str] = None
    workers: Optional[int] = Field(default=None, ge=1)
    lp_backend: Optional[str] = None
    orient: bool = True

    @field_validator("generator")
    @classmethod
    def _known_generator(cls, value: str) -> str:
        try:
            return canonical_kind(value)
        except BadParams as exc:
            raise ValueError(str(exc)) from exc

    @field_validator("n")
    @classmethod
    def _positive_sizes(cls, values: list[int]) -> list[int]:
        if any(value < 1 for value in values):
            raise ValueError("every n must be positive")
        return values

    @field_validator("mechanisms")
    @classmethod
    def _known_mechanisms(cls, values: list[str]) -> list[str]:
        tags = [value.strip().lower() for value in values]
        unknown = [tag for tag in tags if tag not in MECHANISM_TAGS]
        if unknown:
            raise ValueError(f"unknown mechanism(s): {', '.join(unknown)}")
        if len(set(tags)) != len(tags):
            raise ValueError("mechanisms must not repeat")
        return tags

    @model_validator(mode="after")
    def _generator_parameters(self) -> "SweepConfig":
        kind = self.generator
        if kind != "trace" and not self.alpha:
            raise ValueError(f"generator {kind} needs alpha")
        if kind in {"alpha_beta", "adv_thm6_case1", "adv_thm6_case2"}:
            if self.m < 3:
                raise ValueError(f"generator {kind} needs m >= 3")
            if not self.beta:
                raise ValueError(f"generator {kind} needs beta")
        elif self.m != 2:
            raise ValueError(f"generator {kind} produces m = 2 instances")
        elif self.beta:
            raise ValueError(f"generator {kind} takes no beta")
        if kind == "trace" and self.trace_path is None:
            raise ValueError("generator trace needs trace_path")
        return self
