"""Weibull wind speed and the mixed wind-power distribution it induces.

Wind speed ``V`` follows a two-parameter Weibull law. Passing ``V`` through a
piecewise-linear turbine power curve gives a wind-power variable ``W`` with an
atom at zero (calm or storm shutdown), an atom at rated power, and a
continuous density on the ramp between them.

The expectation helpers include both atoms, so that

    expected_surplus(w) - expected_deficit(w) == mean - w

holds exactly (up to quadrature error).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .quadrature import DEFAULT_RTOL, adaptive_simpson


@dataclass(frozen=True)
class WeibullParams:
    scale_c: float
    shape_k: float

    def __post_init__(self):
        if not (self.scale_c > 0 and math.isfinite(self.scale_c)):
            raise ValueError(f"Weibull scale must be positive, got {self.scale_c}")
        if not (self.shape_k > 0 and math.isfinite(self.shape_k)):
            raise ValueError(f"Weibull shape must be positive, got {self.shape_k}")


@dataclass(frozen=True)
class PowerCurve:
    """Turbine power curve: cut-in, rated and cut-out speeds (m/s), rated power (MW)."""

    cut_in_vi: float
    rated_vr: float
    cut_out_vo: float
    rated_power_wr: float

    def __post_init__(self):
        if not (0 < self.cut_in_vi < self.rated_vr < self.cut_out_vo):
            raise ValueError(
                "power curve speeds must satisfy 0 < cut_in < rated < cut_out, got "
                f"({self.cut_in_vi}, {self.rated_vr}, {self.cut_out_vo})"
            )
        if not self.rated_power_wr > 0:
            raise ValueError(f"rated power must be positive, got {self.rated_power_wr}")

    @property
    def slope(self) -> float:
        """MW per m/s on the linear ramp."""
        return self.rated_power_wr / (self.rated_vr - self.cut_in_vi)

    @property
    def ramp_ratio(self) -> float:
        """(v_r - v_i) / v_i."""
        return (self.rated_vr - self.cut_in_vi) / self.cut_in_vi


def _check_speed(v: float) -> None:
    if v < 0 or math.isnan(v):
        raise ValueError(f"wind speed must be non-negative, got {v}")


def weibull_pdf(v: float, params: WeibullParams) -> float:
    _check_speed(v)
    c, k = params.scale_c, params.shape_k
    if v == 0:
        if k < 1:
            return math.inf
        return k / c if k == 1 else 0.0
    x = v / c
    return (k / c) * x ** (k - 1) * math.exp(-(x**k))


def weibull_cdf(v: float, params: WeibullParams) -> float:
    _check_speed(v)
    return -math.expm1(-((v / params.scale_c) ** params.shape_k))


def _survival(v: float, params: WeibullParams) -> float:
    return math.exp(-((v / params.scale_c) ** params.shape_k))


def power_from_speed(v: float, curve: PowerCurve) -> float:
    _check_speed(v)
    if v < curve.cut_in_vi or v >= curve.cut_out_vo:
        return 0.0
    if v < curve.rated_vr:
        return curve.rated_power_wr * (v - curve.cut_in_vi) / (curve.rated_vr - curve.cut_in_vi)
    return curve.rated_power_wr


@dataclass(frozen=True)
class WindPowerDistribution:
    """Mixed law of turbine output: atoms ``p_zero`` at 0 and ``p_rated`` at w_r."""

    params: WeibullParams
    curve: PowerCurve
    p_zero: float
    p_rated: float
    rtol: float = field(default=DEFAULT_RTOL, compare=False)

    def __post_init__(self):
        if not (0 <= self.p_zero <= 1 and 0 <= self.p_rated <= 1):
            raise ValueError("atom probabilities must lie in [0, 1]")
        if self.p_zero + self.p_rated > 1 + 1e-12:
            raise ValueError("atom probabilities sum above 1")

    @property
    def rated(self) -> float:
        return self.curve.rated_power_wr

    def density(self, w: float) -> float:
        """Continuous density on the closed ramp ``[0, w_r]`` (no domain check)."""
        c, k = self.params.scale_c, self.params.shape_k
        vi, wr, l = self.curve.cut_in_vi, self.curve.rated_power_wr, self.curve.ramp_ratio
        x = (1.0 + (w / wr) * l) * vi / c
        return (k * l * vi) / (wr * c) * x ** (k - 1) * math.exp(-(x**k))

    def continuous_mass(self) -> float:
        return adaptive_simpson(self.density, 0.0, self.rated, self.rtol)

    def mean(self) -> float:
        return self.expected_surplus(0.0)

    def _check_schedule(self, w_sched: float) -> None:
        if not (0 <= w_sched <= self.rated):
            raise ValueError(f"scheduled wind {w_sched} outside [0, {self.rated}]")

    def expected_surplus(self, w_sched: float) -> float:
        """E[(W - w_sched)+], including the atom at rated power."""
        self._check_schedule(w_sched)
        wr = self.rated
        if w_sched == wr:
            return 0.0
        ramp = adaptive_simpson(lambda x: (x - w_sched) * self.density(x), w_sched, wr, self.rtol)
        return ramp + (wr - w_sched) * self.p_rated

    def expected_deficit(self, w_sched: float) -> float:
        """E[(w_sched - W)+], including the atom at zero."""
        self._check_schedule(w_sched)
        if w_sched == 0:
            return 0.0
        ramp = adaptive_simpson(lambda x: (w_sched - x) * self.density(x), 0.0, w_sched, self.rtol)
        return ramp + w_sched * self.p_zero


def build_distribution(params: WeibullParams, curve: PowerCurve) -> WindPowerDistribution:
    p_zero = -math.expm1(-((curve.cut_in_vi / params.scale_c) ** params.shape_k)) + _survival(
        curve.cut_out_vo, params
    )
    # F(v_o) - F(v_r); non-negative by construction.
    p_rated = _survival(curve.rated_vr, params) - _survival(curve.cut_out_vo, params)
    return WindPowerDistribution(params, curve, min(p_zero, 1.0), p_rated)


def continuous_pdf(w: float, dist: WindPowerDistribution) -> float:
    if not (0 < w < dist.rated):
        raise ValueError(f"continuous density is defined on (0, {dist.rated}), got {w}")
    return dist.density(w)


def expected_surplus(w_sched: float, dist: WindPowerDistribution) -> float:
    return dist.expected_surplus(w_sched)


def expected_deficit(w_sched: float, dist: WindPowerDistribution) -> float:
    return dist.expected_deficit(w_sched)
