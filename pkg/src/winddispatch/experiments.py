"""Parameter sweeps and critical reserve-coefficient search.

A sweep re-solves a base problem once per grid value of a single parameter.
Parameters are addressed by paths:

    load
    thermal_units[<i>|*].<a|b|c0|p_min|p_max>
    wind_units[<i>|*].<d|k_p|k_r|scale_c|shape_k>

Each grid point gets its own seed derived from ``(master_seed, index)``, so a
row does not depend on which other points were run or in which order.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .pso import PsoConfig
from .solver import DEFAULT_RESTARTS, DEFAULT_SEED, DispatchSolution, InfeasibleDispatchError, solve
from .system import DEFAULT_BALANCE_TOL, DispatchProblem, check_feasibility

DEFAULT_C_GRID = (5.0, 10.0, 15.0, 20.0, 25.0)
DEFAULT_KR_GRID = tuple(float(v) for v in np.linspace(0.0, 100.0, 11))
DEFAULT_KP_GRID = tuple(float(v) for v in np.linspace(0.0, 100.0, 11))

CRITICAL_TOL = 0.1
CRITICAL_DROP = 0.5

_PATH = re.compile(r"^(?:(?P<group>thermal_units|wind_units)\[(?P<index>\d+|\*)\]\.)?(?P<field>\w+)$")
_THERMAL_FIELDS = {"a", "b", "c0", "p_min", "p_max"}
_WIND_FIELDS = {"d", "k_p", "k_r", "scale_c", "shape_k"}


class NoTransitionError(RuntimeError):
    pass


def with_parameter(problem: DispatchProblem, path: str, value: float) -> DispatchProblem:
    """Copy of ``problem`` with the parameter at ``path`` set to ``value``."""
    m = _PATH.match(path)
    if m is None:
        raise ValueError(f"cannot parse parameter path {path!r}")
    group, index, name = m.group("group"), m.group("index"), m.group("field")
    value = float(value)
    if group is None:
        if name != "load":
            raise ValueError(f"unknown top-level parameter {name!r}")
        return dataclasses.replace(problem, load=value)

    units = list(getattr(problem, group))
    allowed = _THERMAL_FIELDS if group == "thermal_units" else _WIND_FIELDS
    if name not in allowed:
        raise ValueError(f"{group} have no sweepable field {name!r} (allowed: {sorted(allowed)})")
    if index == "*":
        targets = range(len(units))
    else:
        if int(index) >= len(units):
            raise ValueError(f"{path}: index out of range ({len(units)} units)")
        targets = [int(index)]
    for i in targets:
        u = units[i]
        if name == "scale_c":
            units[i] = u.with_weibull(scale_c=value)
        elif name == "shape_k":
            units[i] = u.with_weibull(shape_k=value)
        else:
            units[i] = dataclasses.replace(u, **{name: value})
    return dataclasses.replace(problem, **{group: tuple(units)})


def point_seed(master_seed: int, index: int) -> int:
    return int(np.random.SeedSequence([master_seed, index]).generate_state(1)[0])


@dataclass(frozen=True)
class SweepSpec:
    base_problem: DispatchProblem
    param: str
    grid: tuple[float, ...]
    pso: PsoConfig = PsoConfig()
    master_seed: int = DEFAULT_SEED
    restarts: int = DEFAULT_RESTARTS
    repair_tol: float = DEFAULT_BALANCE_TOL
    output: Optional[Path] = None

    def __post_init__(self):
        grid = tuple(float(v) for v in self.grid)
        object.__setattr__(self, "grid", grid)
        if not grid:
            raise ValueError("sweep grid is empty")
        diffs = np.diff(grid)
        if len(grid) > 1 and not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise ValueError("sweep grid must be strictly monotone")
        with_parameter(self.base_problem, self.param, grid[0])


@dataclass(frozen=True)
class SweepRow:
    value: float
    seed: int
    solution: Optional[DispatchSolution]
    error: str = ""


def _run_point(args) -> SweepRow:
    spec, i, value = args
    seed = point_seed(spec.master_seed, i)
    try:
        problem = with_parameter(spec.base_problem, spec.param, value)
        sol = solve(problem, spec.pso, spec.repair_tol, spec.restarts, seed)
    except (InfeasibleDispatchError, ValueError) as exc:
        return SweepRow(value, seed, None, f"{type(exc).__name__}: {exc}")
    return SweepRow(value, seed, sol)


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRow]:
    """Solve every grid point; rows come back in grid order.

    Failures at a point are recorded in that row and the sweep continues.
    If ``spec.output`` is set the CSV is written there as well.
    """
    jobs = [(spec, i, v) for i, v in enumerate(spec.grid)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_point, jobs))
    else:
        rows = [_run_point(j) for j in jobs]
    if spec.output is not None:
        Path(spec.output).write_text(sweep_csv(spec, rows))
    return rows


def sweep_columns(problem: DispatchProblem) -> list[str]:
    return (
        ["param"]
        + [f"p{i + 1}" for i in range(problem.n_thermal)]
        + [f"w{j + 1}" for j in range(problem.n_wind)]
        + ["thermal", "wind_direct", "penalty", "reserve", "total", "feasible", "seed", "error"]
    )


def sweep_csv(spec: SweepSpec, rows: Sequence[SweepRow], provenance: Optional[dict] = None) -> str:
    """Render rows as CSV with ``#`` provenance comment lines on top."""
    buf = io.StringIO()
    meta = {"param": spec.param, "master_seed": spec.master_seed}
    meta.update(provenance or {})
    for key in sorted(meta):
        buf.write(f"# {key}={meta[key]}\n")
    writer = csv.writer(buf, lineterminator="\n")
    problem = spec.base_problem
    writer.writerow(sweep_columns(problem))
    for row in rows:
        if row.solution is None:
            blanks = [""] * (problem.n_units + 5)
            writer.writerow([repr(row.value), *blanks, "False", row.seed, row.error])
            continue
        sol = row.solution
        b = sol.breakdown
        writer.writerow(
            [repr(row.value)]
            + [repr(v) for v in sol.thermal_schedule + sol.wind_schedule]
            + [repr(b.thermal), repr(b.wind_direct), repr(b.penalty), repr(b.reserve), repr(b.total)]
            + [str(sol.feasibility.feasible), row.seed, ""]
        )
    return buf.getvalue()


def rows_feasible(spec: SweepSpec, rows: Sequence[SweepRow]) -> bool:
    """Re-check every solved row against its own problem instance."""
    for row in rows:
        if row.solution is None:
            return False
        problem = with_parameter(spec.base_problem, spec.param, row.value)
        if not check_feasibility(row.solution.schedule, problem, spec.repair_tol).feasible:
            return False
    return True


def find_critical_kr(
    problem: DispatchProblem,
    unit: int,
    scale_c: Optional[float] = None,
    tol: float = CRITICAL_TOL,
    drop: float = CRITICAL_DROP,
    bracket: tuple[float, float] = (0.0, 100.0),
    pso: PsoConfig = PsoConfig(),
    restarts: int = DEFAULT_RESTARTS,
    seed: int = DEFAULT_SEED,
    all_units: bool = True,
) -> float:
    """Smallest reserve coefficient at which wind unit ``unit`` leaves rated output.

    ``unit`` indexes ``problem.wind_units``. With ``all_units`` the reserve
    coefficient of every wind unit is varied together, otherwise only that
    of ``unit``. "Leaves rated" means its schedule falls below
    ``rated - drop``. Bisection stops once the bracket is narrower than
    ``tol``; the bracket midpoint is returned.
    """
    if not 0 <= unit < problem.n_wind:
        raise ValueError(f"wind unit index {unit} out of range")
    if scale_c is not None:
        problem = with_parameter(problem, "wind_units[*].scale_c", scale_c)
    path = "wind_units[*].k_r" if all_units else f"wind_units[{unit}].k_r"
    rated = problem.wind_units[unit].rated

    def dropped(k_r: float) -> bool:
        sol = solve(with_parameter(problem, path, k_r), pso, restarts=restarts, seed=seed)
        return sol.wind_schedule[unit] < rated - drop

    lo, hi = bracket
    if dropped(lo):
        return lo
    if not dropped(hi):
        raise NoTransitionError(f"wind unit {unit} stays at rated output for k_r in [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if dropped(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
