"""Economic dispatch of mixed thermal and wind generation by particle swarm search."""

__version__ = "0.1.0"

from .costs import (
    CostBreakdown,
    ThermalUnit,
    WindUnit,
    penalty_cost,
    reserve_cost,
    thermal_cost,
    total_cost,
    wind_direct_cost,
)
from .pso import PsoConfig, inertia_weight, minimize, step
from .solver import DispatchSolution, InfeasibleDispatchError, repair_balance, solve
from .system import DispatchProblem, FeasibilityReport, LossModel, check_feasibility, demand
from .wind import (
    PowerCurve,
    WeibullParams,
    WindPowerDistribution,
    build_distribution,
    continuous_pdf,
    expected_deficit,
    expected_surplus,
    power_from_speed,
    weibull_cdf,
    weibull_pdf,
)
