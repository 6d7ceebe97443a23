"""Monte Carlo estimates of wind-power expectations.

Speeds are drawn by inverse-CDF sampling, ``v = c * (-ln(1 - U))**(1/k)``,
in fixed-size chunks. Chunk ``i`` uses its own ``SeedSequence`` child so
estimates do not depend on how chunks are scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .wind import PowerCurve, WeibullParams

CHUNK = 1_000_000
# Offset that keeps oracle streams apart from the solver's seeds.
ORACLE_STREAM = 0x6F7261636C65
DEFAULT_ORACLE_SEED = 7


@dataclass(frozen=True)
class Estimate:
    mean: float
    stderr: float

    def sigma_distance(self, value: float) -> float:
        """|value - mean| in standard errors; 0/0 counts as agreement."""
        diff = abs(value - self.mean)
        if self.stderr == 0:
            return 0.0 if diff <= 1e-12 * max(1.0, abs(value)) else float("inf")
        return diff / self.stderr


def _chunk_rngs(n: int, seed: int):
    children = np.random.SeedSequence([ORACLE_STREAM, seed]).spawn(-(-n // CHUNK))
    for i, child in enumerate(children):
        yield min(CHUNK, n - i * CHUNK), np.random.default_rng(child)


def power_from_speed_array(v: np.ndarray, curve: PowerCurve) -> np.ndarray:
    ramp = curve.rated_power_wr * (v - curve.cut_in_vi) / (curve.rated_vr - curve.cut_in_vi)
    return np.select(
        [(v < curve.cut_in_vi) | (v >= curve.cut_out_vo), v < curve.rated_vr],
        [0.0, ramp],
        default=curve.rated_power_wr,
    )


def sample_speeds(n: int, params: WeibullParams, seed: int = DEFAULT_ORACLE_SEED) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be >= 1")
    out = np.empty(n)
    pos = 0
    for size, rng in _chunk_rngs(n, seed):
        u = rng.random(size)
        out[pos : pos + size] = params.scale_c * (-np.log1p(-u)) ** (1.0 / params.shape_k)
        pos += size
    return out


def sample_wind_power(n: int, params: WeibullParams, curve: PowerCurve, seed: int = DEFAULT_ORACLE_SEED) -> np.ndarray:
    return power_from_speed_array(sample_speeds(n, params, seed), curve)


def _estimate(values: np.ndarray) -> Estimate:
    n = values.size
    if n < 2:
        return Estimate(float(values.mean()), 0.0)
    return Estimate(float(values.mean()), float(values.std(ddof=1) / np.sqrt(n)))


def surplus_from_samples(samples: np.ndarray, w_sched: float) -> Estimate:
    return _estimate(np.maximum(samples - w_sched, 0.0))


def deficit_from_samples(samples: np.ndarray, w_sched: float) -> Estimate:
    return _estimate(np.maximum(w_sched - samples, 0.0))


def _check_sched(w_sched: float, curve: PowerCurve) -> None:
    if not 0 <= w_sched <= curve.rated_power_wr:
        raise ValueError(f"scheduled wind {w_sched} outside [0, {curve.rated_power_wr}]")


def estimate_surplus(w_sched: float, n: int, params: WeibullParams, curve: PowerCurve, seed: int = DEFAULT_ORACLE_SEED) -> Estimate:
    _check_sched(w_sched, curve)
    return surplus_from_samples(sample_wind_power(n, params, curve, seed), w_sched)


def estimate_deficit(w_sched: float, n: int, params: WeibullParams, curve: PowerCurve, seed: int = DEFAULT_ORACLE_SEED) -> Estimate:
    _check_sched(w_sched, curve)
    return deficit_from_samples(sample_wind_power(n, params, curve, seed), w_sched)


def estimate_atoms(samples: np.ndarray, rated: float) -> tuple[Estimate, Estimate]:
    """Fractions of samples at zero and at rated power, with binomial errors."""
    n = samples.size
    out = []
    for hit in (samples == 0.0, samples == rated):
        p = hit.mean()
        out.append(Estimate(float(p), float(np.sqrt(p * (1 - p) / n))))
    return out[0], out[1]
