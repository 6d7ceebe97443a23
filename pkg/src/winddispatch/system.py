"""Dispatch instances, network loss models and schedule feasibility."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .costs import ThermalUnit, WindUnit

DEFAULT_BALANCE_TOL = 1e-3


@dataclass(frozen=True)
class LossModel:
    """Transmission losses as a function of the full schedule (MW).

    ``quadratic`` is the B-coefficient form ``x'Bx + b1'x + b0`` over every
    unit output, thermal units first.
    """

    kind: str = "lossless"
    fixed_mw: float = 0.0
    B: Optional[tuple] = None
    b1: Optional[tuple] = None
    b0: float = 0.0

    def __post_init__(self):
        if self.kind not in ("lossless", "fixed", "quadratic"):
            raise ValueError(f"unknown loss model kind {self.kind!r}")
        if self.kind == "fixed" and self.fixed_mw < 0:
            raise ValueError("fixed losses must be non-negative")
        if self.kind == "quadratic":
            if self.B is None:
                raise ValueError("quadratic loss model needs a B matrix")
            B = np.asarray(self.B, dtype=float)
            if B.ndim != 2 or B.shape[0] != B.shape[1]:
                raise ValueError("B matrix must be square")
            sym = 0.5 * (B + B.T)
            if np.linalg.eigvalsh(sym).min() < -1e-12:
                raise ValueError("B matrix must be positive semi-definite")
            if self.b1 is not None and len(self.b1) != B.shape[0]:
                raise ValueError("linear loss terms must match the B matrix size")

    @classmethod
    def lossless(cls) -> "LossModel":
        return cls()

    @classmethod
    def fixed(cls, mw: float) -> "LossModel":
        return cls("fixed", fixed_mw=float(mw))

    @classmethod
    def quadratic(cls, B, b1=None, b0: float = 0.0) -> "LossModel":
        B = tuple(tuple(float(x) for x in row) for row in B)
        b1 = None if b1 is None else tuple(float(x) for x in b1)
        return cls("quadratic", B=B, b1=b1, b0=float(b0))

    def losses(self, schedules) -> np.ndarray | float:
        """Losses for one schedule (returns float) or for rows of a 2-D array."""
        x = np.asarray(schedules, dtype=float)
        single = x.ndim == 1
        x2 = np.atleast_2d(x)
        if self.kind == "lossless":
            out = np.zeros(x2.shape[0])
        elif self.kind == "fixed":
            out = np.full(x2.shape[0], self.fixed_mw)
        else:
            B = np.asarray(self.B)
            if x2.shape[1] != B.shape[0]:
                raise ValueError(f"loss model expects {B.shape[0]} outputs, got {x2.shape[1]}")
            out = np.einsum("ni,ij,nj->n", x2, B, x2) + self.b0
            if self.b1 is not None:
                out = out + x2 @ np.asarray(self.b1)
        return float(out[0]) if single else out

    def as_dict(self) -> dict:
        if self.kind == "fixed":
            return {"kind": "fixed", "value": self.fixed_mw}
        if self.kind == "quadratic":
            return {"kind": "quadratic", "B": [list(r) for r in self.B],
                    "b1": None if self.b1 is None else list(self.b1), "b0": self.b0}
        return {"kind": "lossless"}


@dataclass(frozen=True)
class DispatchProblem:
    thermal_units: tuple[ThermalUnit, ...]
    wind_units: tuple[WindUnit, ...]
    load: float
    loss_model: LossModel = field(default_factory=LossModel)
    # Line flow limits are carried for completeness but not enforced.
    line_limits: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "thermal_units", tuple(self.thermal_units))
        object.__setattr__(self, "wind_units", tuple(self.wind_units))
        object.__setattr__(self, "line_limits", tuple(self.line_limits))
        if len(self.thermal_units) < 1:
            raise ValueError("at least one thermal unit is required as slack")
        if not self.load > 0:
            raise ValueError(f"load must be positive, got {self.load}")
        capacity = sum(u.p_max for u in self.thermal_units) + sum(u.rated for u in self.wind_units)
        if capacity < self.load:
            raise ValueError(f"installed capacity {capacity} MW cannot cover load {self.load} MW")
        if self.loss_model.kind == "quadratic" and len(self.loss_model.B) != self.n_units:
            raise ValueError("loss model B matrix size must equal the number of units")

    @property
    def n_thermal(self) -> int:
        return len(self.thermal_units)

    @property
    def n_wind(self) -> int:
        return len(self.wind_units)

    @property
    def n_units(self) -> int:
        return self.n_thermal + self.n_wind

    @property
    def lower_bounds(self) -> np.ndarray:
        return np.array([u.p_min for u in self.thermal_units] + [0.0] * self.n_wind, dtype=float)

    @property
    def upper_bounds(self) -> np.ndarray:
        return np.array([u.p_max for u in self.thermal_units] + [u.rated for u in self.wind_units], dtype=float)

    def split(self, schedule) -> tuple[np.ndarray, np.ndarray]:
        x = np.asarray(schedule, dtype=float)
        if x.shape != (self.n_units,):
            raise ValueError(f"schedule must have {self.n_units} entries, got shape {x.shape}")
        return x[: self.n_thermal], x[self.n_thermal :]


@dataclass(frozen=True)
class FeasibilityReport:
    balance_residual: float
    limit_violations: tuple[float, ...]
    feasible: bool

    def as_dict(self) -> dict:
        return {
            "balance_residual": self.balance_residual,
            "limit_violations": list(self.limit_violations),
            "feasible": self.feasible,
        }


def demand(problem: DispatchProblem, schedule: Sequence[float]) -> float:
    """Load plus network losses for ``schedule``."""
    problem.split(schedule)
    return problem.load + problem.loss_model.losses(schedule)


def check_feasibility(
    schedule: Sequence[float], problem: DispatchProblem, balance_tol: float = DEFAULT_BALANCE_TOL
) -> FeasibilityReport:
    x = np.concatenate(problem.split(schedule))
    lo, hi = problem.lower_bounds, problem.upper_bounds
    violations = np.maximum(lo - x, 0.0) + np.maximum(x - hi, 0.0)
    residual = float(x.sum() - demand(problem, x))
    feasible = abs(residual) <= balance_tol and not violations.any()
    return FeasibilityReport(residual, tuple(float(v) for v in violations), bool(feasible))
