"""Strict YAML configuration for dispatch instances.

Every mapping key is checked against a fixed schema; unknown keys, missing
required keys, wrong types and violated unit invariants raise
:class:`ConfigError` carrying the file line and dotted field path.

Units: power in MW, speeds in m/s, costs in $/hr (coefficients in $/MWh or
$/MW^2h). See README for the full schema.
"""

from __future__ import annotations

import functools
import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import yaml

from .costs import ThermalUnit, WindUnit
from .pso import PsoConfig
from .solver import BALANCE_PENALTY, DEFAULT_RESTARTS, DEFAULT_SEED
from .system import DEFAULT_BALANCE_TOL, DispatchProblem, LossModel


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field '{field}'")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


NUMBER = (int, float)

THERMAL_KEYS = {"name": str, "a": NUMBER, "b": NUMBER, "c": NUMBER, "p_min": NUMBER, "p_max": NUMBER}
WIND_KEYS = {
    "name": str,
    "rated_power": NUMBER,
    "cut_in": NUMBER,
    "rated_speed": NUMBER,
    "cut_out": NUMBER,
    "weibull_scale": NUMBER,
    "weibull_shape": NUMBER,
    "direct_cost": NUMBER,
    "penalty_coeff": NUMBER,
    "reserve_coeff": NUMBER,
}
LOSS_KEYS = {"kind": str, "value": NUMBER, "B": list, "b1": list, "b0": NUMBER}
PSO_KEYS = {
    "n_particles": int,
    "iter_max": int,
    "w_max": NUMBER,
    "w_min": NUMBER,
    "c1": NUMBER,
    "c2": NUMBER,
    "v_max_fraction": NUMBER,
}
SOLVER_KEYS = {"restarts": int, "repair_tol": NUMBER, "balance_penalty": NUMBER}
TOP_KEYS = {
    "load": NUMBER,
    "seed": int,
    "loss_model": dict,
    "line_limits": list,
    "thermal_units": list,
    "wind_units": list,
    "pso": dict,
    "solver": dict,
}
REQUIRED_TOP = ("load", "thermal_units")
OPTIONAL_UNIT_KEYS = {"name", "penalty_coeff", "reserve_coeff"}


@dataclass(frozen=True)
class DispatchConfig:
    problem: DispatchProblem
    pso: PsoConfig
    seed: int
    restarts: int = DEFAULT_RESTARTS
    repair_tol: float = DEFAULT_BALANCE_TOL
    balance_penalty: float = BALANCE_PENALTY
    digest: str = ""
    source: str = ""


class _Doc:
    """Plain-Python view of a YAML document that remembers node lines."""

    def __init__(self, text: str):
        try:
            node = yaml.compose(text, Loader=yaml.SafeLoader)
        except yaml.YAMLError as exc:
            mark = getattr(exc, "problem_mark", None)
            raise ConfigError(f"invalid YAML: {exc}", None if mark is None else mark.line + 1) from None
        if node is None:
            raise ConfigError("empty configuration")
        self.lines: dict[str, int] = {}
        self._loader = yaml.SafeLoader("")
        self.data = self._convert(node, "")

    def _convert(self, node, path: str):
        self.lines[path] = node.start_mark.line + 1
        if isinstance(node, yaml.MappingNode):
            out = {}
            for k, v in node.value:
                key = k.value
                if key in out:
                    raise ConfigError("duplicate key", k.start_mark.line + 1, _join(path, key))
                out[key] = self._convert(v, _join(path, key))
            return out
        if isinstance(node, yaml.SequenceNode):
            return [self._convert(v, f"{path}[{i}]") for i, v in enumerate(node.value)]
        return self._loader.construct_object(node, deep=True)

    def line(self, path: str) -> int | None:
        while path:
            if path in self.lines:
                return self.lines[path]
            path = path.rsplit(".", 1)[0] if "." in path else ""
        return self.lines.get("")


def _join(path: str, key: str) -> str:
    return f"{path}.{key}" if path else key


def _check_mapping(doc: _Doc, value: Any, path: str, schema: dict, required=()) -> dict:
    if not isinstance(value, dict):
        raise ConfigError("expected a mapping", doc.line(path), path or None)
    for key in value:
        if key not in schema:
            allowed = ", ".join(sorted(schema))
            raise ConfigError(f"unknown key (allowed: {allowed})", doc.line(_join(path, key)), _join(path, key))
    for key in required:
        if key not in value:
            raise ConfigError("missing required field", doc.line(path), _join(path, key))
    for key, v in value.items():
        expected = schema[key]
        ok = isinstance(v, expected) and not (expected in (NUMBER, int) and isinstance(v, bool))
        if not ok:
            raise ConfigError(f"expected {_type_name(expected)}, got {type(v).__name__}", doc.line(_join(path, key)), _join(path, key))
    return value


def _type_name(t) -> str:
    return "number" if t is NUMBER else t.__name__


def _build(doc: _Doc, path: str, factory, *args):
    try:
        return factory(*args)
    except ValueError as exc:
        raise ConfigError(str(exc), doc.line(path), path) from None


def _thermal(doc: _Doc, raw: dict, path: str) -> ThermalUnit:
    required = [k for k in THERMAL_KEYS if k not in OPTIONAL_UNIT_KEYS]
    _check_mapping(doc, raw, path, THERMAL_KEYS, required)
    return _build(
        doc, path, ThermalUnit,
        float(raw["a"]), float(raw["b"]), float(raw["c"]), float(raw["p_min"]), float(raw["p_max"]),
        raw.get("name", ""),
    )


def _wind(doc: _Doc, raw: dict, path: str) -> WindUnit:
    required = [k for k in WIND_KEYS if k not in OPTIONAL_UNIT_KEYS]
    _check_mapping(doc, raw, path, WIND_KEYS, required)
    return _build(
        doc, path, WindUnit.from_parameters,
        float(raw["rated_power"]), float(raw["cut_in"]), float(raw["rated_speed"]), float(raw["cut_out"]),
        float(raw["weibull_scale"]), float(raw["weibull_shape"]), float(raw["direct_cost"]),
        float(raw.get("penalty_coeff", 0.0)), float(raw.get("reserve_coeff", 0.0)), raw.get("name", ""),
    )


def _loss_model(doc: _Doc, raw: dict | None) -> LossModel:
    if raw is None:
        return LossModel.lossless()
    path = "loss_model"
    _check_mapping(doc, raw, path, LOSS_KEYS, ("kind",))
    kind = raw["kind"]
    if kind == "lossless":
        return LossModel.lossless()
    if kind == "fixed":
        if "value" not in raw:
            raise ConfigError("missing required field", doc.line(path), "loss_model.value")
        return _build(doc, path, LossModel.fixed, float(raw["value"]))
    if kind == "quadratic":
        if "B" not in raw:
            raise ConfigError("missing required field", doc.line(path), "loss_model.B")
        return _build(doc, path, LossModel.quadratic, raw["B"], raw.get("b1"), float(raw.get("b0", 0.0)))
    raise ConfigError("kind must be one of lossless, fixed, quadratic", doc.line(f"{path}.kind"), f"{path}.kind")


def parse_config_text(text: str, source: str = "<string>") -> DispatchConfig:
    doc = _Doc(text)
    top = _check_mapping(doc, doc.data, "", TOP_KEYS, REQUIRED_TOP)

    thermal = tuple(_thermal(doc, u, f"thermal_units[{i}]") for i, u in enumerate(top["thermal_units"]))
    wind = tuple(_wind(doc, u, f"wind_units[{i}]") for i, u in enumerate(top.get("wind_units", [])))
    loss = _loss_model(doc, top.get("loss_model"))
    limits = top.get("line_limits", [])
    for i, v in enumerate(limits):
        if not isinstance(v, NUMBER) or isinstance(v, bool):
            raise ConfigError("expected number", doc.line(f"line_limits[{i}]"), f"line_limits[{i}]")
    limits = tuple(float(v) for v in limits)
    problem = _build(doc, "", DispatchProblem, thermal, wind, float(top["load"]), loss, limits)

    seed = int(top.get("seed", DEFAULT_SEED))
    pso_raw = _check_mapping(doc, top.get("pso", {}), "pso", PSO_KEYS)
    pso = _build(doc, "pso", functools.partial(PsoConfig, seed=seed, **pso_raw))
    solver_raw = _check_mapping(doc, top.get("solver", {}), "solver", SOLVER_KEYS)
    restarts = int(solver_raw.get("restarts", DEFAULT_RESTARTS))
    if restarts < 1:
        raise ConfigError("must be >= 1", doc.line("solver.restarts"), "solver.restarts")
    return DispatchConfig(
        problem=problem,
        pso=pso,
        seed=seed,
        restarts=restarts,
        repair_tol=float(solver_raw.get("repair_tol", DEFAULT_BALANCE_TOL)),
        balance_penalty=float(solver_raw.get("balance_penalty", BALANCE_PENALTY)),
        digest=hashlib.sha256(text.encode()).hexdigest(),
        source=source,
    )


def parse_config(path) -> DispatchConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return parse_config_text(text, str(path))


def bundled_config_path(name: str = "six_bus.yaml") -> Path:
    return Path(__file__).parent / "data" / name
