import json
from pathlib import Path

import pytest

from winddispatch.cli import main, parse_grid
from winddispatch.config import ConfigError, bundled_config_path, parse_config, parse_config_text
from winddispatch.solver import DEFAULT_SEED

BASE = bundled_config_path().read_text()


def test_bundled_config(six_bus):
    prob = six_bus.problem
    assert (prob.n_thermal, prob.n_wind, prob.load) == (2, 2, 400.0)
    assert [u.d for u in prob.wind_units] == [8.0, 6.0]
    assert all(u.rated == 40.0 for u in prob.wind_units)
    assert six_bus.pso.c1 == six_bus.pso.c2 == 2.0


def test_power_curve_ordering_reported_with_line():
    text = BASE.replace("cut_in: 5\n    rated_speed: 15", "cut_in: 15\n    rated_speed: 5", 1)
    with pytest.raises(ConfigError) as exc:
        parse_config_text(text)
    assert "cut_in < rated < cut_out" in str(exc.value)
    assert exc.value.field == "wind_units[0]"
    assert exc.value.line == BASE.splitlines().index("  - name: W3") + 1


def test_missing_seed_defaults():
    text = "\n".join(l for l in BASE.splitlines() if not l.startswith("seed:"))
    cfg = parse_config_text(text)
    assert cfg.seed == DEFAULT_SEED == cfg.pso.seed


def test_unknown_key_rejected():
    text = BASE.replace("    p_max: 200\n", "    p_max: 200\n    pmax: 201\n", 1)
    with pytest.raises(ConfigError, match="unknown key") as exc:
        parse_config_text(text)
    assert exc.value.field == "thermal_units[0].pmax"
    assert exc.value.line == text.splitlines().index("    pmax: 201") + 1


def test_missing_field_rejected():
    text = BASE.replace("    b: 11.669\n", "", 1)
    with pytest.raises(ConfigError, match="missing") as exc:
        parse_config_text(text)
    assert exc.value.field == "thermal_units[0].b"


def test_wrong_type_rejected():
    with pytest.raises(ConfigError, match="expected number"):
        parse_config_text(BASE.replace("load: 400", "load: heavy"))
    with pytest.raises(ConfigError, match="expected int"):
        parse_config_text(BASE.replace("iter_max: 200", "iter_max: 2.5"))


def test_bound_violations_rejected():
    with pytest.raises(ConfigError, match="p_min"):
        parse_config_text(BASE.replace("p_min: 50", "p_min: 250"))
    with pytest.raises(ConfigError, match="shape"):
        parse_config_text(BASE.replace("weibull_shape: 2", "weibull_shape: 0", 1))
    with pytest.raises(ConfigError, match="v_max_fraction"):
        parse_config_text(BASE.replace("v_max_fraction: 0.15", "v_max_fraction: 2"))


def test_loss_models():
    fixed = parse_config_text(BASE.replace("  kind: lossless", "  kind: fixed\n  value: 3.5"))
    assert fixed.problem.loss_model.fixed_mw == 3.5
    quad = BASE.replace("  kind: lossless", "  kind: quadratic\n  B: [[0.0001,0,0,0],[0,0.0001,0,0],[0,0,0,0],[0,0,0,0]]")
    assert parse_config_text(quad).problem.loss_model.kind == "quadratic"
    with pytest.raises(ConfigError, match="kind"):
        parse_config_text(BASE.replace("  kind: lossless", "  kind: acflow"))


def test_invalid_yaml_and_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="YAML"):
        parse_config_text("load: [1, 2")
    with pytest.raises(ConfigError, match="cannot read"):
        parse_config(tmp_path / "nope.yaml")


def test_parse_grid():
    assert parse_grid("0:10:3") == (0.0, 5.0, 10.0)
    assert parse_grid("1, 2.5,4") == (1.0, 2.5, 4.0)
    for bad in ("", "1:2", "0:1:0", " , "):
        with pytest.raises(ValueError):
            parse_grid(bad)


@pytest.fixture
def cfg_path(tmp_path):
    path = tmp_path / "six_bus.yaml"
    path.write_text(BASE.replace("iter_max: 200", "iter_max: 80").replace("restarts: 5", "restarts: 2"))
    return path


def test_cli_solve_and_trace(cfg_path, tmp_path):
    out, trace = tmp_path / "sol.json", tmp_path / "trace.csv"
    assert main(["solve", "--config", str(cfg_path), "--seed", "3", "--out", str(out), "--trace", str(trace)]) == 0
    record = json.loads(out.read_text())
    assert record["provenance"]["seed"] == 3
    assert len(record["provenance"]["config_sha256"]) == 64
    assert [round(w, 2) for w in record["solution"]["wind_schedule"]] == [40.0, 40.0]
    assert record["solution"]["feasibility"]["feasible"] is True
    again = tmp_path / "trace2.csv"
    assert main(["trace", "--record", str(out), "--out", str(again)]) == 0
    assert again.read_text() == trace.read_text()
    assert trace.read_text().startswith("# config_sha256=")


def test_cli_solve_infeasible(tmp_path):
    path = tmp_path / "tight.yaml"
    path.write_text(BASE.replace("  kind: lossless", "  kind: fixed\n  value: 60"))
    assert main(["solve", "--config", str(path), "--out", str(tmp_path / "x.json")]) == 1


def test_cli_config_error_exit(tmp_path, capsys):
    path = tmp_path / "bad.yaml"
    path.write_text(BASE.replace("load: 400", "load: 400\nloda: 1"))
    assert main(["solve", "--config", str(path)]) == 2
    assert "loda" in capsys.readouterr().err


def test_cli_sweep(cfg_path, tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--config", str(cfg_path), "--param", "wind_units[*].k_r", "--grid", "0,50", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# config_sha256=")
    assert sum(1 for l in lines if not l.startswith("#")) == 3


def test_cli_sweep_empty_grid(cfg_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--config", str(cfg_path), "--param", "load", "--grid", ""])
    assert exc.value.code != 0
    assert "usage" in capsys.readouterr().err


def test_cli_verify(cfg_path, tmp_path):
    out = tmp_path / "verify.txt"
    assert main(["verify", "--config", str(cfg_path), "--samples", "200000", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.strip().endswith("PASS")
    assert text.count(" sigma=") == 2 * 2 * 20


def test_cli_verify_failure_exit(cfg_path, monkeypatch):
    import winddispatch.cli as cli

    monkeypatch.setattr(cli, "SIGMA_LIMIT", -1.0)
    assert main(["verify", "--config", str(cfg_path), "--samples", "1000", "--points", "3", "--out", "-"]) == 3
