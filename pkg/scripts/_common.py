"""Shared helpers for the experiment scripts."""

import argparse
from pathlib import Path

from winddispatch.config import bundled_config_path, parse_config
from winddispatch.experiments import SweepSpec, run_sweep, sweep_csv, with_parameter


def arg_parser(description: str) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--config", default=str(bundled_config_path()))
    p.add_argument("--out-dir", default="results")
    p.add_argument("--workers", type=int, default=1)
    return p


def load(args):
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return parse_config(args.config), out


def sweep(cfg, problem, param, grid, path, workers=1, **extra):
    """Run one sweep over ``problem`` and write it to ``path``; returns the rows."""
    spec = SweepSpec(problem, param, grid, cfg.pso, cfg.seed, cfg.restarts, cfg.repair_tol)
    rows = run_sweep(spec, workers=workers)
    path.write_text(sweep_csv(spec, rows, {"config_sha256": cfg.digest, **extra}))
    print(f"wrote {path} ({len(rows)} rows, {sum(r.solution is None for r in rows)} failed)")
    return rows


def setting(problem, **values):
    """Apply ``wind_units[*].<name>=value`` for each keyword."""
    for name, value in values.items():
        problem = with_parameter(problem, f"wind_units[*].{name}", value)
    return problem
