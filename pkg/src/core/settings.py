"""Environment-driven settings for tolerances and backends."""

from __future__ import annotations

import os
from pathlib import Path

from dotenv import load_dotenv

from src.core.errors import ConfigError

REPO_ROOT = Path(__file__).resolve().parents[2]

DEFAULT_EPS = 1e-9
DEFAULT_LP_BACKEND = "simplex"
LP_BACKENDS = ("simplex", "highs")
SP_TOLERANCE = 1e-6


def load_environment() -> None:
    load_dotenv(REPO_ROOT / ".env", override=False)


def _parse_float_env(name: str, default: float) -> float:
    raw = os.getenv(name, "").strip()
    if not raw:
        return default
    try:
        value = float(raw)
    except ValueError as exc:
        raise ConfigError(f"{name} must be a number, got {raw!r}") from exc
    if not value > 0.0:
        raise ConfigError(f"{name} must be positive, got {raw!r}")
    return value


def _parse_int_env(name: str, default: int) -> int:
    raw = os.getenv(name, "").strip()
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ConfigError(f"{name} must be at least 1, got {raw!r}")
    return value


def resolve_eps(eps: float | None = None) -> float:
    if eps is not None:
        return float(eps)
    return _parse_float_env("ALLOC_EPS", DEFAULT_EPS)


def resolve_lp_backend(backend: str | None = None) -> str:
    value = (backend or os.getenv("ALLOC_LP_BACKEND", "") or DEFAULT_LP_BACKEND).strip().lower()
    if value not in LP_BACKENDS:
        raise ConfigError(f"Unknown LP backend {value!r}; expected one of {', '.join(LP_BACKENDS)}")
    return value


def resolve_workers(workers: int | None = None) -> int:
    if workers is not None:
        if workers < 1:
            raise ConfigError(f"workers must be at least 1, got {workers}")
        return workers
    return _parse_int_env("ALLOC_WORKERS", 1)
