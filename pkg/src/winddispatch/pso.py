"""Bound-constrained particle swarm minimiser with linearly decaying inertia.

Random numbers come from numpy's ``PCG64`` bit generator (via
``numpy.random.default_rng``), so a seed fixes the whole run.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

RNG_ALGORITHM = "numpy.random.PCG64"


@dataclass(frozen=True)
class PsoConfig:
    n_particles: int = 30
    iter_max: int = 200
    w_max: float = 0.9
    w_min: float = 0.4
    c1: float = 2.0
    c2: float = 2.0
    v_max_fraction: float = 0.15
    seed: int = 0
    lower: Optional[tuple] = None
    upper: Optional[tuple] = None

    def __post_init__(self):
        if self.n_particles < 2:
            raise ValueError("n_particles must be >= 2")
        if self.iter_max < 1:
            raise ValueError("iter_max must be >= 1")
        if not (self.w_max >= self.w_min >= 0):
            raise ValueError("inertia weights must satisfy w_max >= w_min >= 0")
        if not (0 < self.v_max_fraction <= 1):
            raise ValueError("v_max_fraction must lie in (0, 1]")
        if (self.lower is None) != (self.upper is None):
            raise ValueError("lower and upper bounds must be given together")
        if self.lower is not None:
            lo = np.asarray(self.lower, dtype=float)
            hi = np.asarray(self.upper, dtype=float)
            if lo.shape != hi.shape or lo.ndim != 1:
                raise ValueError("bounds must be 1-D vectors of equal length")
            if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi)) and np.all(lo < hi)):
                raise ValueError("bounds must be finite with lower < upper in every dimension")
            object.__setattr__(self, "lower", tuple(float(v) for v in lo))
            object.__setattr__(self, "upper", tuple(float(v) for v in hi))

    @property
    def n_dims(self) -> int:
        if self.lower is None:
            raise ValueError("PsoConfig has no bounds")
        return len(self.lower)

    @property
    def v_max(self) -> np.ndarray:
        return self.v_max_fraction * (np.asarray(self.upper) - np.asarray(self.lower))


@dataclass(frozen=True)
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    pbest_position: np.ndarray
    pbest_fitness: float


@dataclass
class SwarmState:
    """Whole-swarm state stored as arrays, one row per particle."""

    positions: np.ndarray
    velocities: np.ndarray
    pbest_positions: np.ndarray
    pbest_fitness: np.ndarray
    gbest_position: np.ndarray
    gbest_fitness: float
    rng: np.random.Generator
    iteration: int = 0

    @property
    def particles(self) -> list[Particle]:
        return [
            Particle(self.positions[i], self.velocities[i], self.pbest_positions[i], float(self.pbest_fitness[i]))
            for i in range(self.positions.shape[0])
        ]

    def copy(self) -> "SwarmState":
        rng = np.random.Generator(type(self.rng.bit_generator)())
        rng.bit_generator.state = self.rng.bit_generator.state
        return SwarmState(
            self.positions.copy(),
            self.velocities.copy(),
            self.pbest_positions.copy(),
            self.pbest_fitness.copy(),
            self.gbest_position.copy(),
            self.gbest_fitness,
            rng,
            self.iteration,
        )


@dataclass(frozen=True)
class PsoResult:
    position: np.ndarray
    fitness: float
    trace: tuple[float, ...]
    state: SwarmState = field(repr=False)

    def trace_csv(self) -> str:
        return trace_to_csv(self.trace)


def trace_to_csv(trace: Sequence[float]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["iteration", "gbest_fitness"])
    for i, f in enumerate(trace):
        writer.writerow([i, repr(float(f))])
    return buf.getvalue()


def inertia_weight(iteration: int, config: PsoConfig) -> float:
    if not 0 <= iteration <= config.iter_max:
        raise ValueError(f"iteration {iteration} outside [0, {config.iter_max}]")
    return config.w_max - (config.w_max - config.w_min) * iteration / config.iter_max


def _evaluate(objective, positions: np.ndarray, vectorized: bool) -> np.ndarray:
    if vectorized:
        fit = np.asarray(objective(positions), dtype=float).reshape(positions.shape[0])
    else:
        fit = np.array([float(objective(x)) for x in positions])
    fit[~np.isfinite(fit)] = np.inf
    return fit


def _update_bests(state: SwarmState, fit: np.ndarray) -> None:
    improved = fit < state.pbest_fitness
    state.pbest_positions[improved] = state.positions[improved]
    state.pbest_fitness[improved] = fit[improved]
    best = int(np.argmin(state.pbest_fitness))
    if state.pbest_fitness[best] < state.gbest_fitness:
        state.gbest_fitness = float(state.pbest_fitness[best])
        state.gbest_position = state.pbest_positions[best].copy()


def initial_state(
    objective: Callable, config: PsoConfig, vectorized: bool = False, rng: np.random.Generator | None = None
) -> SwarmState:
    """Uniform random positions inside the bounds, zero velocities."""
    rng = np.random.default_rng(config.seed) if rng is None else rng
    lo, hi = np.asarray(config.lower), np.asarray(config.upper)
    x = lo + rng.random((config.n_particles, config.n_dims)) * (hi - lo)
    x = np.clip(x, lo, hi)
    v = np.zeros_like(x)
    fit = _evaluate(objective, x, vectorized)
    state = SwarmState(x, v, x.copy(), np.full(config.n_particles, np.inf), x[0].copy(), np.inf, rng)
    _update_bests(state, fit)
    return state


def step(state: SwarmState, objective: Callable, config: PsoConfig, vectorized: bool = False) -> SwarmState:
    """Advance the swarm one iteration. Returns a new state; ``state`` is untouched."""
    s = state.copy()
    lo, hi = np.asarray(config.lower), np.asarray(config.upper)
    v_max = config.v_max
    w = inertia_weight(min(s.iteration, config.iter_max), config)
    n, d = s.positions.shape
    u1 = s.rng.random((n, d))
    u2 = s.rng.random((n, d))
    v = (
        w * s.velocities
        + config.c1 * u1 * (s.pbest_positions - s.positions)
        + config.c2 * u2 * (s.gbest_position - s.positions)
    )
    v = np.clip(v, -v_max, v_max)
    x = s.positions + v
    outside = (x < lo) | (x > hi)
    x = np.clip(x, lo, hi)
    v[outside] = 0.0
    s.positions, s.velocities = x, v
    _update_bests(s, _evaluate(objective, x, vectorized))
    s.iteration += 1
    return s


def minimize(objective: Callable, config: PsoConfig, vectorized: bool = False) -> PsoResult:
    """Run ``config.iter_max`` PSO iterations.

    ``objective`` maps a position vector to a scalar, or, with
    ``vectorized=True``, an ``(n_particles, n_dims)`` array to a vector of
    fitness values. Non-finite fitness is treated as ``+inf``.

    The returned trace has ``iter_max + 1`` entries: the gbest fitness after
    initialisation and after every iteration.
    """
    if config.lower is None:
        raise ValueError("minimize needs bounds in the PsoConfig")
    state = initial_state(objective, config, vectorized)
    trace = [state.gbest_fitness]
    for _ in range(config.iter_max):
        state = step(state, objective, config, vectorized)
        trace.append(state.gbest_fitness)
    return PsoResult(state.gbest_position.copy(), state.gbest_fitness, tuple(trace), state)
