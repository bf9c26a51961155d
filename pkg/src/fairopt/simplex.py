"""Small dense two-phase simplex for ``max c.x  s.t.  A x <= b,  x >= lower``.

Pivoting follows Bland's rule so runs are deterministic and cannot cycle. The
``highs`` backend hands the same program to ``scipy.optimize.linprog`` and is
used to cross-check the tableau code and to speed up large sweeps.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from src.core.errors import DimensionMismatch, Infeasible, LPError, Unbounded
from src.core.settings import resolve_lp_backend

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-9
FEASIBILITY_TOL = 1e-9
MAX_PIVOTS = 50_000


@dataclass(frozen=True, eq=False)
class LinearProgram:
    objective: np.ndarray
    a_ub: np.ndarray
    b_ub: np.ndarray
    lower: np.ndarray | None = None

    def __post_init__(self) -> None:
        c = np.atleast_1d(np.asarray(self.objective, dtype=float))
        k = c.shape[0]
        a = np.asarray(self.a_ub, dtype=float)
        if a.size == 0:
            a = a.reshape(0, k)
        b = np.atleast_1d(np.asarray(self.b_ub, dtype=float))
        lower = np.zeros(k) if self.lower is None else np.atleast_1d(np.asarray(self.lower, dtype=float))

        if c.ndim != 1 or a.ndim != 2 or a.shape[1] != k or b.shape != (a.shape[0],) or lower.shape != (k,):
            raise DimensionMismatch(
                f"objective {c.shape}, constraints {a.shape}, bounds {b.shape}, lower {lower.shape} are inconsistent"
            )
        for name, values in (("objective", c), ("a_ub", a), ("b_ub", b), ("lower", lower)):
            if not np.all(np.isfinite(values)):
                raise LPError(f"{name} has non-finite entries")

        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "a_ub", a)
        object.__setattr__(self, "b_ub", b)
        object.__setattr__(self, "lower", lower)

    @property
    def n_vars(self) -> int:
        return int(self.objective.shape[0])

    @property
    def n_rows(self) -> int:
        return int(self.a_ub.shape[0])

    def max_violation(self, x: np.ndarray) -> float:
        rows = self.a_ub @ x - self.b_ub if self.n_rows else np.zeros(0)
        bounds = self.lower - x
        return float(max(0.0, rows.max(initial=0.0), bounds.max(initial=0.0)))


@dataclass(frozen=True, eq=False)
class LPSolution:
    value: float
    x: np.ndarray
    pivots: int


def _pivot(tableau: np.ndarray, row: int, col: int) -> None:
    tableau[row] /= tableau[row, col]
    column = tableau[:, col].copy()
    column[row] = 0.0
    tableau -= np.outer(column, tableau[row])
    rhs = tableau[:, -1]
    rhs[(rhs < 0.0) & (rhs > -1e-11)] = 0.0


def _run_phase(tableau: np.ndarray, basis: np.ndarray, cost: np.ndarray, pivots: int) -> int:
    while True:
        if pivots >= MAX_PIVOTS:
            raise LPError(f"simplex exceeded {MAX_PIVOTS} pivots")
        reduced = cost - cost[basis] @ tableau[:, :-1]
        entering = np.flatnonzero(reduced > PIVOT_TOL)
        if entering.size == 0:
            return pivots
        col = int(entering[0])
        column = tableau[:, col]
        positive = column > PIVOT_TOL
        if not positive.any():
            raise Unbounded(f"objective unbounded along variable {col}")
        ratios = np.full(column.shape, np.inf)
        ratios[positive] = tableau[positive, -1] / column[positive]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + 1e-12 * max(1.0, abs(best)))
        row = int(ties[np.argmin(basis[ties])])
        _pivot(tableau, row, col)
        basis[row] = col
        pivots += 1


def _solve_dense(lp: LinearProgram) -> LPSolution:
    k = lp.n_vars
    rows = lp.n_rows
    a = lp.a_ub
    b = lp.b_ub - a @ lp.lower if rows else np.zeros(0)

    flipped = b < 0.0
    sign = np.where(flipped, -1.0, 1.0)
    artificial_rows = np.flatnonzero(flipped)
    n_art = artificial_rows.size
    n_cols = k + rows + n_art

    tableau = np.zeros((rows, n_cols + 1))
    tableau[:, :k] = a * sign[:, None]
    tableau[np.arange(rows), k + np.arange(rows)] = sign
    tableau[:, -1] = b * sign
    basis = k + np.arange(rows)
    for offset, row in enumerate(artificial_rows):
        tableau[row, k + rows + offset] = 1.0
        basis[row] = k + rows + offset

    pivots = 0
    if n_art:
        phase_one = np.zeros(n_cols)
        phase_one[k + rows :] = -1.0
        pivots = _run_phase(tableau, basis, phase_one, pivots)
        infeasibility = -float(phase_one[basis] @ tableau[:, -1])
        if infeasibility > FEASIBILITY_TOL:
            raise Infeasible(f"no point satisfies the constraints (phase-one residual {infeasibility:.3g})")

        keep = np.ones(rows, dtype=bool)
        for row in range(rows):
            if basis[row] < k + rows:
                continue
            candidates = np.flatnonzero(np.abs(tableau[row, : k + rows]) > PIVOT_TOL)
            if candidates.size:
                col = int(candidates[0])
                _pivot(tableau, row, col)
                basis[row] = col
                pivots += 1
            else:
                keep[row] = False
        tableau = np.delete(tableau[keep], np.s_[k + rows : k + rows + n_art], axis=1)
        basis = basis[keep]

    cost = np.zeros(k + rows)
    cost[:k] = lp.objective
    pivots = _run_phase(tableau, basis, cost, pivots)

    z = np.zeros(k + rows)
    z[basis] = tableau[:, -1]
    x = lp.lower + z[:k]
    return LPSolution(value=float(lp.objective @ x), x=x, pivots=pivots)


def _solve_highs(lp: LinearProgram) -> LPSolution:
    from scipy.optimize import linprog

    result = linprog(
        -lp.objective,
        A_ub=lp.a_ub if lp.n_rows else None,
        b_ub=lp.b_ub if lp.n_rows else None,
        bounds=[(float(low), None) for low in lp.lower],
        method="highs",
    )
    if result.status == 2:
        raise Infeasible(result.message)
    if result.status == 3:
        raise Unbounded(result.message)
    if result.status != 0:
        raise LPError(f"highs failed: {result.message}")
    x = np.asarray(result.x, dtype=float)
    return LPSolution(value=float(lp.objective @ x), x=x, pivots=int(getattr(result, "nit", 0)))


def solve_lp(lp: LinearProgram, backend: str | None = None) -> LPSolution:
    """Solve ``lp``; raises Infeasible or Unbounded instead of returning a status."""
    chosen = resolve_lp_backend(backend)
    solution = _solve_highs(lp) if chosen == "highs" else _solve_dense(lp)
    logger.debug("%s solved %dx%d LP in %d pivots, value %.12g", chosen, lp.n_rows, lp.n_vars, solution.pivots, solution.value)
    return solution
