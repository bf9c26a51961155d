"""Optimal fair benchmark: best SW or utilization over SI + EF allocations.

The search runs over non-wasteful allocations parameterized by dominant shares
``y``. Agents with identical demand rows share one variable, since mutual
envy-freeness between them forces equal shares. EF rows enter lazily when the
number of type pairs is large; the final point is always checked against the
full constraint set.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from src.core.errors import DegenerateDenominator, Infeasible, OracleError
from src.core.model import Instance, envy_coefficients
from src.core.settings import resolve_eps, resolve_lp_backend
from src.fairopt.simplex import LinearProgram, solve_lp
from src.mechanisms.base import MechanismResult

logger = logging.getLogger(__name__)

FULL_EF_PAIR_LIMIT = 2500
CUT_TOL = 1e-12
CHECK_TOL = 1e-9
HIGHS_CHECK_TOL = 1e-7

OBJECTIVE_SW = "sw"
OBJECTIVE_UTIL = "util"


@dataclass(frozen=True, eq=False)
class FairBenchmark:
    sw_opt: float
    util_opt: float
    y_sw: np.ndarray
    y_util: np.ndarray
    n_types: int


@dataclass(frozen=True)
class FairRatio:
    sw_ratio: float
    util_ratio: float


@dataclass(frozen=True, eq=False)
class _TypeTable:
    demands: np.ndarray
    counts: np.ndarray
    inverse: np.ndarray
    envy: np.ndarray
    n: int


def _collapse(instance: Instance) -> _TypeTable:
    types, inverse, counts = np.unique(instance.demands, axis=0, return_inverse=True, return_counts=True)
    return _TypeTable(
        demands=types,
        counts=counts.astype(float),
        inverse=np.asarray(inverse).reshape(-1),
        envy=envy_coefficients(Instance(types)),
        n=instance.n,
    )


def _build_program(table: _TypeTable, objective: str, pairs: list[tuple[int, int]]) -> LinearProgram:
    k, m = table.demands.shape
    util = objective == OBJECTIVE_UTIL
    n_vars = k + 1 if util else k
    usage = (table.counts[:, None] * table.demands).T

    rows: list[np.ndarray] = []
    bounds: list[float] = []
    for r in range(m):
        row = np.zeros(n_vars)
        row[:k] = usage[r]
        rows.append(row)
        bounds.append(1.0)
    if util:
        for r in range(m):
            row = np.zeros(n_vars)
            row[:k] = -usage[r]
            row[k] = 1.0
            rows.append(row)
            bounds.append(0.0)
    for a, b in pairs:
        row = np.zeros(n_vars)
        row[a] = -1.0
        row[b] = table.envy[a, b]
        rows.append(row)
        bounds.append(0.0)

    objective_vector = np.zeros(n_vars)
    if util:
        objective_vector[k] = 1.0
    else:
        objective_vector[:k] = table.counts
    lower = np.full(n_vars, 1.0 / table.n)
    if util:
        lower[k] = 0.0
    return LinearProgram(objective=objective_vector, a_ub=np.vstack(rows), b_ub=np.array(bounds), lower=lower)


def _envy_violation(table: _TypeTable, y: np.ndarray) -> np.ndarray:
    violation = table.envy * y[None, :] - y[:, None]
    np.fill_diagonal(violation, -np.inf)
    return violation


def _solve_fair(instance: Instance, objective: str, backend: str | None) -> np.ndarray:
    table = _collapse(instance)
    k = table.demands.shape[0]
    all_pairs = [(a, b) for a in range(k) for b in range(k) if a != b]
    lazy = len(all_pairs) > FULL_EF_PAIR_LIMIT
    pairs: list[tuple[int, int]] = [] if lazy else all_pairs
    included = np.zeros((k, k), dtype=bool)
    for a, b in pairs:
        included[a, b] = True

    for round_index in range(k * k + 1):
        program = _build_program(table, objective, pairs)
        try:
            solution = solve_lp(program, backend=backend)
        except Infeasible as exc:
            raise OracleError("the equal split is always fair, so the fair program cannot be infeasible") from exc
        y_types = solution.x[:k]
        if not lazy:
            break
        violation = _envy_violation(table, y_types)
        violation[included] = -np.inf
        worst = np.argmax(violation, axis=1)
        added = 0
        for a in range(k):
            b = int(worst[a])
            if violation[a, b] > CUT_TOL:
                pairs.append((a, b))
                included[a, b] = True
                added += 1
        logger.debug("%s oracle round %d: %d EF rows, %d added", objective, round_index, len(pairs), added)
        if added == 0:
            break
    else:
        raise OracleError("envy cut generation did not converge")

    tol = CHECK_TOL if resolve_lp_backend(backend) == "simplex" else HIGHS_CHECK_TOL
    _resubstitution_check(table, y_types, tol)
    return y_types[table.inverse]


def _resubstitution_check(table: _TypeTable, y_types: np.ndarray, tol: float) -> None:
    if np.any(y_types < 1.0 / table.n - tol):
        raise OracleError("optimal shares violate share incentive")
    usage = (table.counts[:, None] * table.demands * y_types[:, None]).sum(axis=0)
    if np.any(usage > 1.0 + tol):
        raise OracleError(f"optimal shares overuse a resource (max column sum {usage.max():.12g})")
    if table.demands.shape[0] > 1 and float(_envy_violation(table, y_types).max()) > tol:
        raise OracleError("optimal shares violate envy-freeness")


def max_fair_sw(instance: Instance, backend: str | None = None) -> tuple[float, np.ndarray]:
    y = _solve_fair(instance, OBJECTIVE_SW, backend)
    return float(y.sum()), y


def max_fair_util(instance: Instance, backend: str | None = None) -> tuple[float, np.ndarray]:
    y = _solve_fair(instance, OBJECTIVE_UTIL, backend)
    value = float((y[:, None] * instance.demands).sum(axis=0).min())
    return value, y


def compute_benchmark(instance: Instance, backend: str | None = None) -> FairBenchmark:
    sw_opt, y_sw = max_fair_sw(instance, backend)
    util_opt, y_util = max_fair_util(instance, backend)
    return FairBenchmark(
        sw_opt=sw_opt,
        util_opt=util_opt,
        y_sw=y_sw,
        y_util=y_util,
        n_types=int(np.unique(instance.demands, axis=0).shape[0]),
    )


def fair_ratio(result: MechanismResult, benchmark: FairBenchmark, eps: float | None = None) -> FairRatio:
    tol = resolve_eps(eps)
    sw = result.social_welfare
    util = result.utilization
    if sw <= tol or util <= tol:
        raise DegenerateDenominator(f"{result.mechanism} produced SW={sw:.3g}, utilization={util:.3g}")
    return FairRatio(sw_ratio=benchmark.sw_opt / sw, util_ratio=benchmark.util_opt / util)
