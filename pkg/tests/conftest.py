import pytest

from winddispatch.config import bundled_config_path, parse_config
from winddispatch.costs import ThermalUnit, WindUnit
from winddispatch.system import DispatchProblem
from winddispatch.wind import PowerCurve, WeibullParams, build_distribution

CURVE = PowerCurve(5.0, 15.0, 45.0, 40.0)
BASE_PARAMS = WeibullParams(5.0, 2.0)


@pytest.fixture(scope="session")
def six_bus():
    return parse_config(bundled_config_path())


@pytest.fixture(scope="session")
def base_dist():
    return build_distribution(BASE_PARAMS, CURVE)


def wind_unit(d, k_p=0.0, k_r=1.0, c=5.0, name=""):
    return WindUnit.from_parameters(40.0, 5.0, 15.0, 45.0, c, 2.0, d, k_p, k_r, name)


def open_system(k_r=1.0, k_p=0.0, c=5.0, load=400.0):
    """Two thermal units whose limits never bind near 400 MW, plus two wind units."""
    thermal = (
        ThermalUnit(0.00533, 11.669, 213.1, 0.0, 500.0, "T1"),
        ThermalUnit(0.00889, 10.333, 200.0, 0.0, 500.0, "T2"),
    )
    wind = (wind_unit(8.0, k_p, k_r, c, "W3"), wind_unit(6.0, k_p, k_r, c, "W4"))
    return DispatchProblem(thermal, wind, load)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
