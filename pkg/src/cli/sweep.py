"""Seeded experiment sweeps: config parsing, per-trial evaluation, CSV rows and aggregates.

Every trial draws one instance, solves the fair benchmark once and scores each
mechanism against it. Rows are written in trial-id order whatever the worker
count; the aggregate block reports the mean of per-trial ratios.
"""

from __future__ import annotations

import csv
import itertools
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, TextIO

import pandas as pd
from pydantic import ValidationError
from tqdm import tqdm

from src.cli.schemas import (
    BASE_COLUMNS,
    MECHANISM_FIELDS,
    TEXT_FIELDS,
    ExperimentRecord,
    MechanismOutcome,
    SweepConfig,
    sweep_columns,
)
from src.core.errors import ConfigError, OutOfDomain
from src.core.model import partition
from src.core.settings import resolve_eps, resolve_lp_backend, resolve_workers
from src.fairopt import compute_benchmark, fair_ratio, theoretical_ratios
from src.instances import GeneratorSpec, TracePool, derive_seed, generate, load_trace_pool
from src.mechanisms import parse_score, run_tag

logger = logging.getLogger(__name__)

LIST_KEYS = frozenset({"n", "alpha", "beta", "mechanisms"})
AGGREGATE_MARKER = "# aggregate"


def parse_sweep_config(text: str, source: str = "<config>", base_dir: Path | None = None) -> SweepConfig:
    """Parse flat ``key = value`` lines; list keys take comma-separated values."""
    known = set(SweepConfig.model_fields)
    raw: dict[str, object] = {}
    for line_number, line in enumerate(text.splitlines(), 1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ConfigError(f"{source}:{line_number}: expected key = value, got {content!r}")
        key, value = (part.strip() for part in content.split("=", 1))
        key = key.lower()
        if key not in known:
            raise ConfigError(f"{source}:{line_number}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"{source}:{line_number}: duplicate key {key!r}")
        if key in LIST_KEYS:
            raw[key] = [item.strip() for item in value.split(",") if item.strip()]
        else:
            raw[key] = value

    try:
        config = SweepConfig.model_validate(raw)
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in error['loc']) or 'config'}: {error['msg']}" for error in exc.errors()
        )
        raise ConfigError(f"{source}: {problems}") from None

    if config.trace_path is not None and not config.trace_path.is_absolute() and base_dir is not None:
        config = config.model_copy(update={"trace_path": base_dir / config.trace_path})
    return config


def load_sweep_config(path: str | Path) -> SweepConfig:
    config_path = Path(path)
    try:
        text = config_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read sweep config {config_path}: {exc.strerror or exc}") from exc
    return parse_sweep_config(text, source=str(config_path), base_dir=config_path.resolve().parent)


@dataclass(frozen=True)
class SweepPoint:
    point_id: int
    n: int
    alpha: float | None
    beta: float | None


@dataclass(frozen=True)
class TrialTask:
    trial_id: int
    point_id: int
    spec: GeneratorSpec
    mechanisms: tuple[str, ...]
    g: str | None
    eps: float
    lp_backend: str
    orient: bool
    pool: TracePool | None = None


def sweep_points(config: SweepConfig) -> list[SweepPoint]:
    grid = itertools.product(config.n, config.alpha or [None], config.beta or [None])
    return [SweepPoint(point_id=index, n=n, alpha=alpha, beta=beta) for index, (n, alpha, beta) in enumerate(grid)]


def build_tasks(config: SweepConfig, eps: float, lp_backend: str, pool: TracePool | None = None) -> list[TrialTask]:
    tasks: list[TrialTask] = []
    for point in sweep_points(config):
        for trial in range(config.trials):
            spec = GeneratorSpec(
                kind=config.generator,
                n=point.n,
                m=config.m,
                alpha=point.alpha,
                beta=point.beta,
                seed=derive_seed(config.seed, point.point_id, trial),
                trace_path=config.trace_path,
            )
            tasks.append(
                TrialTask(
                    trial_id=point.point_id * config.trials + trial,
                    point_id=point.point_id,
                    spec=spec,
                    mechanisms=tuple(config.mechanisms),
                    g=config.g,
                    eps=eps,
                    lp_backend=lp_backend,
                    orient=config.orient,
                    pool=pool,
                )
            )
    return tasks


def _bounds(tag: str, alpha: float, beta: float | None, n: int, m: int) -> tuple[float | None, float | None]:
    try:
        bounds = theoretical_ratios(tag, alpha, beta, n=n, m=m)
    except OutOfDomain:
        return None, None
    return bounds.sw, bounds.util


def run_trial(task: TrialTask) -> ExperimentRecord:
    instance = generate(task.spec, task.pool)
    groups = partition(instance)
    benchmark = compute_benchmark(instance, backend=task.lp_backend)

    outcomes: dict[str, MechanismOutcome] = {}
    for tag in task.mechanisms:
        result = run_tag(tag, instance, score_spec=task.g, eps=task.eps, orient=task.orient)
        ratio = fair_ratio(result, benchmark, eps=task.eps)
        sw_bound, util_bound = _bounds(tag, groups.alpha, groups.beta, instance.n, instance.m)
        outcomes[tag] = MechanismOutcome(
            sw=result.social_welfare,
            util=result.utilization,
            sw_ratio=ratio.sw_ratio,
            util_ratio=ratio.util_ratio,
            sw_bound=sw_bound,
            util_bound=util_bound,
            branch=result.branch,
            score=result.score,
        )

    return ExperimentRecord(
        trial_id=task.trial_id,
        point_id=task.point_id,
        generator=task.spec.kind,
        n=instance.n,
        m=instance.m,
        alpha_requested=task.spec.alpha,
        beta_requested=task.spec.beta,
        seed=task.spec.seed,
        alpha_realized=groups.alpha,
        beta_realized=groups.beta,
        sw_opt=benchmark.sw_opt,
        util_opt=benchmark.util_opt,
        mechanisms=outcomes,
    )


def _format_cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _numeric_columns(mechanisms: Iterable[str]) -> list[str]:
    columns = [column for column in BASE_COLUMNS if column != "generator"]
    for tag in mechanisms:
        columns.extend(f"{tag}_{name}" for name in MECHANISM_FIELDS if name not in TEXT_FIELDS)
    return columns


def aggregate_rows(rows: list[dict[str, object]], mechanisms: Iterable[str]) -> pd.DataFrame:
    """Per-point mean and max ratios, mean values, and mean improvement over drf when it ran."""
    tags = list(mechanisms)
    frame = pd.DataFrame(rows)
    for column in _numeric_columns(tags):
        frame[column] = pd.to_numeric(frame[column], errors="coerce")

    named: dict[str, tuple[str, str]] = {
        "generator": ("generator", "first"),
        "n": ("n", "first"),
        "m": ("m", "first"),
        "alpha_requested": ("alpha_requested", "first"),
        "beta_requested": ("beta_requested", "first"),
        "trials": ("trial_id", "count"),
        "alpha_realized_mean": ("alpha_realized", "mean"),
        "beta_realized_mean": ("beta_realized", "mean"),
        "sw_opt_mean": ("sw_opt", "mean"),
        "util_opt_mean": ("util_opt", "mean"),
    }
    gains: list[str] = []
    for tag in tags:
        for metric in ("sw", "util"):
            named[f"{tag}_{metric}_ratio_mean"] = (f"{tag}_{metric}_ratio", "mean")
            named[f"{tag}_{metric}_ratio_max"] = (f"{tag}_{metric}_ratio", "max")
            named[f"{tag}_{metric}_mean"] = (f"{tag}_{metric}", "mean")
        if "drf" in tags and tag != "drf":
            for metric in ("sw", "util"):
                relative = f"{tag}_{metric}_over_drf"
                frame[relative] = frame[f"{tag}_{metric}"] / frame[f"drf_{metric}"]
                named[f"{tag}_{metric}_gain_vs_drf"] = (relative, "mean")
                gains.append(f"{tag}_{metric}_gain_vs_drf")

    aggregate = frame.groupby("point_id", sort=True).agg(**named).reset_index()
    for column in gains:
        aggregate[column] = aggregate[column] - 1.0
    return aggregate


def _evaluate(tasks: list[TrialTask], workers: int) -> Iterator[ExperimentRecord]:
    if workers <= 1 or len(tasks) <= 1:
        for task in tasks:
            yield run_trial(task)
        return
    chunksize = max(1, len(tasks) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as executor:
        yield from executor.map(run_trial, tasks, chunksize=chunksize)


def summary_path_for(output: Path) -> Path:
    return output.with_suffix(".summary.csv")


def run_sweep(
    config: SweepConfig,
    output: Path | None = None,
    stream: TextIO | None = None,
    workers: int | None = None,
    progress: bool = True,
    eps: float | None = None,
) -> dict[str, object]:
    """Run every trial of ``config``; returns a run summary for logging."""
    tol = resolve_eps(eps)
    backend = resolve_lp_backend(config.lp_backend)
    worker_count = resolve_workers(workers if workers is not None else config.workers)
    if "fg" in config.mechanisms:
        parse_score(config.g or "coord:1", config.m)
    pool = load_trace_pool(config.trace_path) if config.generator == "trace" else None

    tasks = build_tasks(config, tol, backend, pool)
    columns = sweep_columns(config.mechanisms)
    target = stream if stream is not None else sys.stdout
    started = time.perf_counter()
    logger.info("sweep: %d trials over %d point(s), %d worker(s)", len(tasks), len(tasks) // config.trials, worker_count)

    handle = output.open("w", encoding="utf-8", newline="") if output is not None else target
    rows: list[dict[str, object]] = []
    try:
        writer = csv.DictWriter(handle, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        bar = tqdm(
            total=len(tasks),
            desc="sweep",
            file=sys.stderr,
            disable=not progress or not sys.stderr.isatty(),
        )
        with bar:
            for record in _evaluate(tasks, worker_count):
                row = record.to_row()
                rows.append(row)
                writer.writerow({column: _format_cell(row[column]) for column in columns})
                handle.flush()
                bar.update(1)
    finally:
        if output is not None:
            handle.close()

    aggregate = aggregate_rows(rows, config.mechanisms)
    summary_output: Path | None = None
    if output is not None:
        summary_output = summary_path_for(output)
        aggregate.to_csv(summary_output, index=False, lineterminator="\n")
    else:
        target.write(f"{AGGREGATE_MARKER}\n")
        aggregate.to_csv(target, index=False, lineterminator="\n")
        target.flush()

    return {
        "trials": len(tasks),
        "points": len(sweep_points(config)),
        "workers": worker_count,
        "elapsed_seconds": round(time.perf_counter() - started, 3),
        "output": str(output) if output is not None else None,
        "summary_output": str(summary_output) if summary_output is not None else None,
    }
