"""Generation cost terms and the composite dispatch objective."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .quadrature import adaptive_simpson
from .wind import PowerCurve, WeibullParams, WindPowerDistribution, build_distribution

TABLE_POINTS = 401


@dataclass(frozen=True)
class ThermalUnit:
    """Quadratic-cost unit: cost = a p^2 + b p + c0 ($/hr), p in MW."""

    a: float
    b: float
    c0: float
    p_min: float
    p_max: float
    name: str = ""

    def __post_init__(self):
        if self.p_min > self.p_max:
            raise ValueError(f"thermal unit {self.name!r}: p_min {self.p_min} > p_max {self.p_max}")
        if self.a < 0:
            raise ValueError(f"thermal unit {self.name!r}: quadratic coefficient must be >= 0")


@dataclass(frozen=True)
class WindUnit:
    distribution: WindPowerDistribution
    d: float
    k_p: float
    k_r: float
    name: str = ""

    def __post_init__(self):
        for label in ("d", "k_p", "k_r"):
            if getattr(self, label) < 0:
                raise ValueError(f"wind unit {self.name!r}: {label} must be >= 0")

    @classmethod
    def from_parameters(
        cls,
        rated_power: float,
        cut_in: float,
        rated_speed: float,
        cut_out: float,
        scale_c: float,
        shape_k: float,
        d: float,
        k_p: float = 0.0,
        k_r: float = 0.0,
        name: str = "",
    ) -> "WindUnit":
        dist = build_distribution(
            WeibullParams(scale_c, shape_k), PowerCurve(cut_in, rated_speed, cut_out, rated_power)
        )
        return cls(dist, d, k_p, k_r, name)

    @property
    def rated(self) -> float:
        return self.distribution.rated

    def with_weibull(self, scale_c: float | None = None, shape_k: float | None = None) -> "WindUnit":
        params = self.distribution.params
        new = WeibullParams(
            params.scale_c if scale_c is None else scale_c,
            params.shape_k if shape_k is None else shape_k,
        )
        return WindUnit(build_distribution(new, self.distribution.curve), self.d, self.k_p, self.k_r, self.name)


@dataclass(frozen=True)
class CostBreakdown:
    thermal: float
    wind_direct: float
    penalty: float
    reserve: float

    @property
    def total(self) -> float:
        return self.thermal + self.wind_direct + self.penalty + self.reserve

    def as_dict(self) -> dict[str, float]:
        return {
            "thermal": self.thermal,
            "wind_direct": self.wind_direct,
            "penalty": self.penalty,
            "reserve": self.reserve,
            "total": self.total,
        }


class ExpectationTable:
    """Surplus/deficit expectations tabulated on a uniform grid over ``[0, w_r]``.

    Node values are exact up to quadrature tolerance: per-segment moments
    of the ramp density are integrated once and accumulated, then atoms are
    added. Between nodes the table interpolates linearly; both expectations
    are convex with second derivative equal to the ramp density, so the
    interpolation error is at most ``h**2 / 8 * max(density)``.
    """

    def __init__(self, dist: WindPowerDistribution, n_points: int = TABLE_POINTS):
        if n_points < 2:
            raise ValueError("need at least two grid points")
        self.dist = dist
        wr = dist.rated
        grid = np.linspace(0.0, wr, n_points)
        m0 = np.empty(n_points - 1)
        m1 = np.empty(n_points - 1)
        for j in range(n_points - 1):
            lo, hi = float(grid[j]), float(grid[j + 1])
            m0[j] = adaptive_simpson(dist.density, lo, hi, dist.rtol)
            m1[j] = adaptive_simpson(lambda x: x * dist.density(x), lo, hi, dist.rtol)
        below0 = np.concatenate(([0.0], np.cumsum(m0)))
        below1 = np.concatenate(([0.0], np.cumsum(m1)))
        above0 = below0[-1] - below0
        above1 = below1[-1] - below1
        self.grid = grid
        self.surplus = above1 - grid * above0 + (wr - grid) * dist.p_rated
        self.deficit = grid * (below0 + dist.p_zero) - below1
        self.surplus[-1] = 0.0
        self.deficit[0] = 0.0
        np.maximum(self.surplus, 0.0, out=self.surplus)
        np.maximum(self.deficit, 0.0, out=self.deficit)
        self.grid.setflags(write=False)
        self.surplus.setflags(write=False)
        self.deficit.setflags(write=False)

    def expected_surplus(self, w):
        return np.interp(w, self.grid, self.surplus)

    def expected_deficit(self, w):
        return np.interp(w, self.grid, self.deficit)


@functools.lru_cache(maxsize=256)
def expectation_table(dist: WindPowerDistribution, n_points: int = TABLE_POINTS) -> ExpectationTable:
    return ExpectationTable(dist, n_points)


def _check_wind(w: float, unit: WindUnit) -> None:
    if not (0 <= w <= unit.rated) or math.isnan(w):
        raise ValueError(f"wind schedule {w} outside [0, {unit.rated}] for unit {unit.name!r}")


def thermal_cost(p: float, unit: ThermalUnit) -> float:
    return unit.a * p * p + unit.b * p + unit.c0


def wind_direct_cost(w: float, unit: WindUnit) -> float:
    _check_wind(w, unit)
    return unit.d * w


def penalty_cost(w: float, unit: WindUnit, exact: bool = False) -> float:
    _check_wind(w, unit)
    if unit.k_p == 0:
        return 0.0
    if exact:
        return unit.k_p * unit.distribution.expected_surplus(w)
    return unit.k_p * float(expectation_table(unit.distribution).expected_surplus(w))


def reserve_cost(w: float, unit: WindUnit, exact: bool = False) -> float:
    _check_wind(w, unit)
    if unit.k_r == 0:
        return 0.0
    if exact:
        return unit.k_r * unit.distribution.expected_deficit(w)
    return unit.k_r * float(expectation_table(unit.distribution).expected_deficit(w))


def total_cost(schedule, problem, exact: bool = False) -> CostBreakdown:
    """Cost breakdown of a full schedule ``[p_1..p_M, w_1..w_N]``."""
    thermal, wind = problem.split(schedule)
    c_thermal = 0.0
    for p, unit in zip(thermal, problem.thermal_units):
        c_thermal += thermal_cost(float(p), unit)
    c_direct = c_pen = c_res = 0.0
    for w, unit in zip(wind, problem.wind_units):
        w = float(w)
        c_direct += wind_direct_cost(w, unit)
        c_pen += penalty_cost(w, unit, exact)
        c_res += reserve_cost(w, unit, exact)
    return CostBreakdown(c_thermal, c_direct, c_pen, c_res)


def total_cost_batch(schedules: np.ndarray, problem) -> np.ndarray:
    """Vectorised total cost over rows of ``schedules`` using the cached tables.

    Entries outside a wind unit's ``[0, w_r]`` are not rejected here; callers
    keep rows inside the box bounds.
    """
    schedules = np.atleast_2d(np.asarray(schedules, dtype=float))
    m = len(problem.thermal_units)
    totals = np.zeros(schedules.shape[0])
    for i, unit in enumerate(problem.thermal_units):
        p = schedules[:, i]
        totals += unit.a * p * p + unit.b * p + unit.c0
    for j, unit in enumerate(problem.wind_units):
        w = schedules[:, m + j]
        totals += unit.d * w
        if unit.k_p or unit.k_r:
            table = expectation_table(unit.distribution)
            if unit.k_p:
                totals += unit.k_p * table.expected_surplus(w)
            if unit.k_r:
                totals += unit.k_r * table.expected_deficit(w)
    return totals
