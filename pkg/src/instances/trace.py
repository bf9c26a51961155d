"""Two-resource instances sampled from a cluster task-request trace (``cpu``, ``mem`` columns)."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from src.core.errors import BadParams, EmptyPool, TraceIoError
from src.core.model import Instance

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ("cpu", "mem")


@dataclass(frozen=True, eq=False)
class TracePool:
    demands: np.ndarray
    skipped: int
    cpu_dominant_fraction: float

    @property
    def size(self) -> int:
        return int(self.demands.shape[0])


def load_trace_pool(path: str | Path) -> TracePool:
    """Read the trace, drop rows with a missing or non-positive request, and normalize the rest."""
    trace_path = Path(path)
    try:
        frame = pd.read_csv(trace_path, skipinitialspace=True)
    except FileNotFoundError as exc:
        raise TraceIoError(f"trace file not found: {trace_path}") from exc
    except (OSError, pd.errors.EmptyDataError, pd.errors.ParserError, UnicodeDecodeError) as exc:
        raise TraceIoError(f"cannot read trace {trace_path}: {exc}") from exc

    frame.columns = [str(column).strip().lower() for column in frame.columns]
    missing = [column for column in TRACE_COLUMNS if column not in frame.columns]
    if missing:
        raise TraceIoError(f"trace {trace_path} lacks column(s): {', '.join(missing)}")

    values = frame[list(TRACE_COLUMNS)].apply(pd.to_numeric, errors="coerce").to_numpy(dtype=float)
    valid = np.all(np.isfinite(values) & (values > 0.0), axis=1)
    skipped = int((~valid).sum())
    if skipped:
        logger.warning("skipped %d unusable row(s) in %s", skipped, trace_path)
    requests = values[valid]
    if requests.shape[0] == 0:
        raise EmptyPool(f"trace {trace_path} has no row with positive cpu and mem")

    demands = requests / requests.max(axis=1, keepdims=True)
    cpu_dominant = float(np.mean(demands[:, 0] == 1.0))
    logger.debug("trace pool %s: %d rows, %.3f cpu-dominant", trace_path, demands.shape[0], cpu_dominant)
    return TracePool(demands=demands, skipped=skipped, cpu_dominant_fraction=cpu_dominant)


def sample_pool(pool: TracePool, n: int, seed: int) -> Instance:
    if n < 1:
        raise BadParams(f"n must be positive, got {n}")
    rng = np.random.default_rng(seed)
    picks = rng.choice(pool.size, size=n, replace=True)
    return Instance(pool.demands[picks])


def ingest_trace(path: str | Path, n: int, seed: int) -> Instance:
    return sample_pool(load_trace_pool(path), n, seed)
