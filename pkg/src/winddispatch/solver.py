"""Economic dispatch by particle swarm search with slack-unit repair."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .costs import CostBreakdown, total_cost, total_cost_batch
from .pso import PsoConfig, minimize
from .system import DEFAULT_BALANCE_TOL, DispatchProblem, FeasibilityReport, check_feasibility

BALANCE_PENALTY = 1e6  # $/MWh per MW of unresolved imbalance
DEFAULT_RESTARTS = 5
DEFAULT_SEED = 2012
REPAIR_ITERATIONS = 50


class InfeasibleDispatchError(RuntimeError):
    pass


@dataclass(frozen=True)
class DispatchSolution:
    thermal_schedule: tuple[float, ...]
    wind_schedule: tuple[float, ...]
    breakdown: CostBreakdown
    feasibility: FeasibilityReport
    trace: tuple[float, ...]
    seed: int
    restart_fitness: tuple[float, ...] = ()

    @property
    def schedule(self) -> np.ndarray:
        return np.array(self.thermal_schedule + self.wind_schedule)

    def as_record(self) -> dict:
        return {
            "thermal_schedule": list(self.thermal_schedule),
            "wind_schedule": list(self.wind_schedule),
            "breakdown": self.breakdown.as_dict(),
            "feasibility": self.feasibility.as_dict(),
            "seed": self.seed,
            "restart_fitness": list(self.restart_fitness),
            "trace": list(self.trace),
        }


def slack_index(problem: DispatchProblem) -> int:
    """Thermal unit with the widest output range; lowest index on ties."""
    ranges = [u.p_max - u.p_min for u in problem.thermal_units]
    return int(np.argmax(ranges))


def _repair_rows(x: np.ndarray, problem: DispatchProblem) -> tuple[np.ndarray, np.ndarray]:
    x = x.copy()
    s = slack_index(problem)
    lo, hi = problem.thermal_units[s].p_min, problem.thermal_units[s].p_max
    # Quadratic losses depend on the slack output itself; iterate to a fixed point.
    n_iter = REPAIR_ITERATIONS if problem.loss_model.kind == "quadratic" else 1
    for _ in range(n_iter):
        residual = problem.load + problem.loss_model.losses(x) - x.sum(axis=1)
        x[:, s] = np.clip(x[:, s] + residual, lo, hi)
        if np.all(np.abs(residual) < 1e-12):
            break
    residual = problem.load + problem.loss_model.losses(x) - x.sum(axis=1)
    return x, residual


def repair_balance(schedule, problem: DispatchProblem) -> np.ndarray:
    """Move the slack unit to absorb the power-balance shortfall, then clamp it.

    Whatever imbalance the clamp leaves behind is left in place for the
    caller to penalise.
    """
    x = np.concatenate(problem.split(schedule))
    repaired, _ = _repair_rows(x[None, :], problem)
    return repaired[0]


def penalized_fitness(rows: np.ndarray, problem: DispatchProblem, penalty: float = BALANCE_PENALTY) -> np.ndarray:
    """Cost of repaired rows plus ``penalty * |residual imbalance|``."""
    repaired, residual = _repair_rows(np.atleast_2d(rows), problem)
    return total_cost_batch(repaired, problem) + penalty * np.abs(residual)


def _restart_seed(seed: int, restart: int) -> int:
    return int(np.random.SeedSequence([seed, restart]).generate_state(1, np.uint64)[0])


def solve(
    problem: DispatchProblem,
    pso: Optional[PsoConfig] = None,
    repair_tol: float = DEFAULT_BALANCE_TOL,
    restarts: int = DEFAULT_RESTARTS,
    seed: Optional[int] = None,
    penalty: float = BALANCE_PENALTY,
) -> DispatchSolution:
    """Minimise total generation cost for ``problem``.

    The swarm searches over every unit except the slack unit and units whose
    limits coincide; those are fixed or set by repair. ``restarts``
    independently seeded swarms are run and the lowest-fitness result kept
    (earliest restart on ties). ``seed`` defaults to ``pso.seed``.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    pso = PsoConfig() if pso is None else pso
    seed = pso.seed if seed is None else int(seed)

    lo, hi = problem.lower_bounds, problem.upper_bounds
    s = slack_index(problem)
    free = np.array([i for i in range(problem.n_units) if i != s and hi[i] > lo[i]], dtype=int)
    base = lo.astype(float)

    def expand(positions: np.ndarray) -> np.ndarray:
        rows = np.tile(base, (positions.shape[0], 1))
        rows[:, free] = positions
        return rows

    def objective(positions: np.ndarray) -> np.ndarray:
        return penalized_fitness(expand(positions), problem, penalty)

    best_x = None
    best_fit = np.inf
    best_trace: tuple[float, ...] = ()
    fits = []
    for r in range(restarts):
        if free.size == 0:
            pos = np.empty((1, 0))
            fit = float(objective(pos)[0])
            trace = (fit,)
        else:
            cfg = dataclasses.replace(pso, seed=_restart_seed(seed, r), lower=tuple(lo[free]), upper=tuple(hi[free]))
            res = minimize(objective, cfg, vectorized=True)
            pos, fit, trace = res.position[None, :], res.fitness, res.trace
        fits.append(fit)
        if fit < best_fit or best_x is None:
            best_x, best_fit, best_trace = pos, fit, trace

    schedule = repair_balance(expand(best_x)[0], problem)
    report = check_feasibility(schedule, problem, repair_tol)
    if not report.feasible:
        raise InfeasibleDispatchError(
            f"no schedule met the power balance within {repair_tol} MW "
            f"(best residual {report.balance_residual:.6g} MW)"
        )
    thermal, wind = problem.split(schedule)
    return DispatchSolution(
        tuple(float(v) for v in thermal),
        tuple(float(v) for v in wind),
        total_cost(schedule, problem),
        report,
        tuple(float(f) for f in best_trace),
        seed,
        tuple(float(f) for f in fits),
    )
