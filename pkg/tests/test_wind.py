import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from winddispatch.oracle import estimate_atoms, sample_wind_power, surplus_from_samples, deficit_from_samples
from winddispatch.wind import (
    PowerCurve,
    WeibullParams,
    build_distribution,
    continuous_pdf,
    expected_deficit,
    expected_surplus,
    power_from_speed,
    weibull_cdf,
    weibull_pdf,
)

from conftest import BASE_PARAMS, CURVE

C_GRID = (5.0, 10.0, 15.0, 20.0, 25.0)


# --- Weibull law -----------------------------------------------------------

def test_pdf_vanishes_at_origin_for_k_above_one():
    assert weibull_pdf(0.0, WeibullParams(5.0, 2.0)) == 0.0


def test_pdf_exponential_case():
    assert weibull_pdf(5.0, WeibullParams(5.0, 1.0)) == pytest.approx(math.exp(-1) / 5, rel=1e-15)
    assert weibull_pdf(5.0, WeibullParams(5.0, 1.0)) == pytest.approx(0.07358, abs=1e-5)


def test_pdf_integrates_to_one():
    val, _ = integrate.quad(lambda v: weibull_pdf(v, BASE_PARAMS), 0.0, np.inf, epsabs=1e-12)
    assert val == pytest.approx(1.0, abs=1e-8)


def test_cdf_values():
    assert weibull_cdf(0.0, BASE_PARAMS) == 0.0
    for k in (0.7, 1.0, 2.0, 3.5):
        assert weibull_cdf(5.0, WeibullParams(5.0, k)) == pytest.approx(1 - math.exp(-1), abs=1e-12)
    assert weibull_cdf(5.0, BASE_PARAMS) == pytest.approx(0.632121, abs=1e-6)


@pytest.mark.parametrize("v", [0.5, 2.0, 5.0, 9.0, 15.0, 30.0])
def test_cdf_is_integral_of_pdf(v):
    val, _ = integrate.quad(lambda s: weibull_pdf(s, BASE_PARAMS), 0.0, v, epsabs=1e-13, epsrel=1e-12)
    assert weibull_cdf(v, BASE_PARAMS) == pytest.approx(val, abs=1e-8)


def test_cdf_derivative_is_pdf():
    h = 1e-5
    for v in np.linspace(0.1, 30.0, 60):
        deriv = (weibull_cdf(v + h, BASE_PARAMS) - weibull_cdf(v - h, BASE_PARAMS)) / (2 * h)
        assert deriv == pytest.approx(weibull_pdf(v, BASE_PARAMS), abs=1e-4)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 60.0), st.floats(0.0, 60.0))
def test_cdf_monotone(a, b):
    lo, hi = sorted((a, b))
    # 1 - exp(-x) rounds to 1.0 once x exceeds ~37, so the upper bound is inclusive.
    assert 0.0 <= weibull_cdf(lo, BASE_PARAMS) <= weibull_cdf(hi, BASE_PARAMS) <= 1.0


def test_negative_speed_rejected():
    with pytest.raises(ValueError):
        weibull_pdf(-1.0, BASE_PARAMS)
    with pytest.raises(ValueError):
        weibull_cdf(-0.1, BASE_PARAMS)
    with pytest.raises(ValueError):
        power_from_speed(-2.0, CURVE)


@pytest.mark.parametrize("c, k", [(0.0, 2.0), (5.0, 0.0), (-1.0, 2.0)])
def test_invalid_weibull(c, k):
    with pytest.raises(ValueError):
        WeibullParams(c, k)


# --- power curve -------------------------------------------------------------

@pytest.mark.parametrize("v, expected", [(3.0, 0.0), (5.0, 0.0), (10.0, 20.0), (15.0, 40.0), (20.0, 40.0), (45.0, 0.0), (50.0, 0.0)])
def test_power_curve_regions(v, expected):
    assert power_from_speed(v, CURVE) == pytest.approx(expected)


@pytest.mark.parametrize("speeds", [(15, 5, 45), (5, 5, 45), (5, 15, 15), (0, 15, 45)])
def test_power_curve_ordering_rejected(speeds):
    with pytest.raises(ValueError, match="cut_in < rated < cut_out"):
        PowerCurve(*speeds, 40.0)


# --- mixed distribution ------------------------------------------------------

def test_atom_closed_forms(base_dist):
    assert base_dist.p_zero == pytest.approx(1 - math.exp(-1) + math.exp(-81), rel=1e-14)
    assert base_dist.p_rated == pytest.approx(math.exp(-9) - math.exp(-81), rel=1e-14)
    assert base_dist.p_rated == pytest.approx(1.2341e-4, rel=1e-4)


def test_atoms_match_monte_carlo(base_dist):
    samples = sample_wind_power(2_000_000, BASE_PARAMS, CURVE, seed=11)
    zero, rated = estimate_atoms(samples, 40.0)
    assert zero.sigma_distance(base_dist.p_zero) < 3
    assert rated.sigma_distance(base_dist.p_rated) < 3


@pytest.mark.parametrize("c", C_GRID)
def test_normalization(c):
    dist = build_distribution(WeibullParams(c, 2.0), CURVE)
    assert dist.p_zero + dist.p_rated + dist.continuous_mass() == pytest.approx(1.0, abs=1e-6)


def test_continuous_mass_matches_scipy(base_dist):
    val, _ = integrate.quad(lambda w: continuous_pdf(w, base_dist), 0.0, 40.0, epsabs=1e-13, epsrel=1e-12)
    assert base_dist.continuous_mass() == pytest.approx(val, abs=1e-9)
    assert val == pytest.approx(1 - base_dist.p_zero - base_dist.p_rated, abs=1e-9)


@pytest.mark.parametrize("c", C_GRID)
def test_density_is_change_of_variables(c):
    params = WeibullParams(c, 2.0)
    dist = build_distribution(params, CURVE)
    a = CURVE.rated_power_wr / (CURVE.rated_vr - CURVE.cut_in_vi)
    b = -a * CURVE.cut_in_vi
    for w in np.linspace(0.01, 39.99, 41):
        expected = weibull_pdf((w - b) / a, params) / a
        assert continuous_pdf(w, dist) == pytest.approx(expected, rel=1e-10)
        assert continuous_pdf(w, dist) >= 0


@pytest.mark.parametrize("w", [0.0, 40.0, -1.0, 41.0])
def test_continuous_pdf_domain(base_dist, w):
    with pytest.raises(ValueError):
        continuous_pdf(w, base_dist)


def test_surplus_and_deficit_endpoints(base_dist):
    assert expected_surplus(40.0, base_dist) == 0.0
    assert expected_deficit(0.0, base_dist) == 0.0
    mean = base_dist.mean()
    assert expected_deficit(40.0, base_dist) == pytest.approx(40.0 - mean, abs=1e-9)
    assert expected_deficit(20.0, base_dist) >= 20.0 * base_dist.p_zero


def test_expectations_match_scipy(base_dist):
    f = lambda x: continuous_pdf(x, base_dist)
    for w in (0.5, 7.3, 19.0, 33.3, 39.9):
        sur, _ = integrate.quad(lambda x: (x - w) * f(x), w, 40.0, epsabs=1e-13, epsrel=1e-12)
        dfc, _ = integrate.quad(lambda x: (w - x) * f(x), 0.0, w, epsabs=1e-13, epsrel=1e-12)
        assert expected_surplus(w, base_dist) == pytest.approx(sur + (40 - w) * base_dist.p_rated, abs=1e-9)
        assert expected_deficit(w, base_dist) == pytest.approx(dfc + w * base_dist.p_zero, abs=1e-9)


def test_mean_matches_monte_carlo(base_dist):
    samples = sample_wind_power(2_000_000, BASE_PARAMS, CURVE, seed=3)
    assert surplus_from_samples(samples, 0.0).sigma_distance(base_dist.mean()) < 3
    assert deficit_from_samples(samples, 40.0).sigma_distance(40.0 - base_dist.mean()) < 3


@pytest.mark.parametrize("w", [-0.1, 40.1])
def test_schedule_outside_rating_rejected(base_dist, w):
    with pytest.raises(ValueError):
        expected_surplus(w, base_dist)
    with pytest.raises(ValueError):
        expected_deficit(w, base_dist)


@pytest.mark.parametrize("c", C_GRID)
def test_monotonicity(c):
    dist = build_distribution(WeibullParams(c, 2.0), CURVE)
    grid = np.linspace(0.0, 40.0, 100)
    sur = np.array([dist.expected_surplus(w) for w in grid])
    dfc = np.array([dist.expected_deficit(w) for w in grid])
    assert np.all(np.diff(sur) <= 1e-12)
    assert np.all(np.diff(dfc) >= -1e-12)
    assert np.all(sur >= 0) and np.all(dfc >= 0)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.0, 40.0), st.sampled_from(C_GRID))
def test_surplus_minus_deficit_identity(w, c):
    dist = build_distribution(WeibullParams(c, 2.0), CURVE)
    lhs = dist.expected_surplus(w) - dist.expected_deficit(w)
    assert lhs == pytest.approx(dist.mean() - w, abs=1e-6)
