"""Instance generators: seeded synthetic, adversarial constructions, trace sampling."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from src.core.errors import BadParams
from src.core.model import Instance
from src.instances.adversarial import adv_drf, adv_f1, adv_f2, adv_thm6
from src.instances.synthetic import derive_seed, gen_alpha, gen_alpha_beta, minor_count
from src.instances.trace import TracePool, ingest_trace, load_trace_pool, sample_pool

GENERATOR_KINDS = (
    "alpha",
    "alpha_beta",
    "adv_drf",
    "adv_f1",
    "adv_f2",
    "adv_thm6_case1",
    "adv_thm6_case2",
    "trace",
)


def canonical_kind(kind: str) -> str:
    key = kind.strip().lower().replace("-", "_")
    if key not in GENERATOR_KINDS:
        raise BadParams(f"unknown generator {kind!r}; expected one of {', '.join(GENERATOR_KINDS)}")
    return key


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int
    m: int = 2
    alpha: float | None = None
    beta: float | None = None
    seed: int = 0
    trace_path: Path | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", canonical_kind(self.kind))
        if self.n < 1:
            raise BadParams(f"n must be positive, got {self.n}")

    def _require_alpha(self) -> float:
        if self.alpha is None:
            raise BadParams(f"generator {self.kind} needs alpha")
        return self.alpha

    def _require_beta(self) -> float:
        if self.beta is None:
            raise BadParams(f"generator {self.kind} needs beta")
        return self.beta


def generate(spec: GeneratorSpec, pool: TracePool | None = None) -> Instance:
    """Build the instance ``spec`` describes. A preloaded ``pool`` skips re-reading the trace."""
    kind = spec.kind
    if kind == "alpha":
        return gen_alpha(spec.n, spec._require_alpha(), spec.seed)
    if kind == "alpha_beta":
        return gen_alpha_beta(spec.n, spec.m, spec._require_alpha(), spec._require_beta(), spec.seed)
    if kind == "adv_drf":
        return adv_drf(spec.n, spec._require_alpha())
    if kind == "adv_f1":
        return adv_f1(spec.n, spec._require_alpha())
    if kind == "adv_f2":
        return adv_f2(spec.n, spec._require_alpha())
    if kind in {"adv_thm6_case1", "adv_thm6_case2"}:
        case = 1 if kind.endswith("1") else 2
        return adv_thm6(spec.n, spec.m, spec._require_alpha(), spec._require_beta(), case)
    if pool is not None:
        return sample_pool(pool, spec.n, spec.seed)
    if spec.trace_path is None:
        raise BadParams("generator trace needs a trace path")
    return ingest_trace(spec.trace_path, spec.n, spec.seed)


__all__ = [
    "GENERATOR_KINDS",
    "GeneratorSpec",
    "TracePool",
    "adv_drf",
    "adv_f1",
    "adv_f2",
    "adv_thm6",
    "canonical_kind",
    "derive_seed",
    "gen_alpha",
    "gen_alpha_beta",
    "generate",
    "ingest_trace",
    "load_trace_pool",
    "minor_count",
    "sample_pool",
]
