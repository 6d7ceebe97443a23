"""Command-line entry point: ``winddispatch {solve,sweep,verify,trace}``.

Exit codes: 0 success, 1 infeasible dispatch, 2 configuration or usage
error, 3 Monte Carlo verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, DispatchConfig, parse_config
from .experiments import SweepSpec, run_sweep, sweep_csv
from .oracle import DEFAULT_ORACLE_SEED, deficit_from_samples, sample_wind_power, surplus_from_samples
from .pso import trace_to_csv
from .solver import InfeasibleDispatchError, solve

log = logging.getLogger("winddispatch")

EXIT_OK, EXIT_INFEASIBLE, EXIT_CONFIG, EXIT_VERIFY = 0, 1, 2, 3
SIGMA_LIMIT = 3.0


def parse_grid(spec: str) -> tuple[float, ...]:
    """``start:stop:num`` (inclusive linspace) or a comma-separated list."""
    spec = spec.strip()
    if not spec:
        raise ValueError("grid is empty")
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError("range grid must be start:stop:num")
        start, stop, num = float(parts[0]), float(parts[1]), int(parts[2])
        if num < 1:
            raise ValueError("grid is empty")
        return tuple(float(v) for v in np.linspace(start, stop, num))
    values = tuple(float(v) for v in spec.split(",") if v.strip())
    if not values:
        raise ValueError("grid is empty")
    return values


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _provenance(cfg: DispatchConfig, seed: int) -> dict:
    return {"config_sha256": cfg.digest, "seed": seed, "version": __version__}


def _write(path, text: str) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_solve(args, cfg: DispatchConfig) -> int:
    seed = cfg.seed if args.seed is None else args.seed
    try:
        sol = solve(cfg.problem, cfg.pso, cfg.repair_tol, cfg.restarts, seed, cfg.balance_penalty)
    except InfeasibleDispatchError as exc:
        log.error("infeasible: %s", exc)
        return EXIT_INFEASIBLE
    record = {"provenance": _provenance(cfg, seed), "solution": sol.as_record()}
    _write(args.out, _dump(record))
    if args.trace:
        header = f"# config_sha256={cfg.digest}\n# seed={seed}\n"
        Path(args.trace).write_text(header + trace_to_csv(sol.trace))
    return EXIT_OK


def cmd_sweep(args, cfg: DispatchConfig) -> int:
    try:
        grid = parse_grid(args.grid)
        spec = SweepSpec(cfg.problem, args.param, grid, cfg.pso,
                         cfg.seed if args.seed is None else args.seed, cfg.restarts, cfg.repair_tol)
    except ValueError as exc:
        args.parser.error(f"sweep: {exc}")
    rows = run_sweep(spec, workers=args.workers)
    _write(args.out, sweep_csv(spec, rows, {"config_sha256": cfg.digest}))
    return EXIT_OK


def cmd_verify(args, cfg: DispatchConfig) -> int:
    worst = 0.0
    lines = []
    for j, unit in enumerate(cfg.problem.wind_units):
        dist = unit.distribution
        samples = sample_wind_power(args.samples, dist.params, dist.curve, args.seed + j)
        for w in np.linspace(0.0, dist.rated, args.points):
            w = float(w)
            for label, analytic, est in (
                ("surplus", dist.expected_surplus(w), surplus_from_samples(samples, w)),
                ("deficit", dist.expected_deficit(w), deficit_from_samples(samples, w)),
            ):
                sigma = est.sigma_distance(analytic)
                worst = max(worst, sigma)
                lines.append(
                    f"unit={unit.name or j} w={w:.4f} {label} analytic={analytic:.6f} "
                    f"mc={est.mean:.6f} stderr={est.stderr:.2e} sigma={sigma:.3f}"
                )
    lines.append(f"max_sigma={worst:.3f} limit={SIGMA_LIMIT} samples={args.samples} seed={args.seed}")
    lines.append("PASS" if worst <= SIGMA_LIMIT else "FAIL")
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK if worst <= SIGMA_LIMIT else EXIT_VERIFY


def cmd_trace(args) -> int:
    try:
        record = json.loads(Path(args.record).read_text())
        trace = record["solution"]["trace"]
        prov = record["provenance"]
    except (OSError, ValueError, KeyError) as exc:
        log.error("cannot read solution record: %s", exc)
        return EXIT_CONFIG
    header = f"# config_sha256={prov['config_sha256']}\n# seed={prov['seed']}\n"
    _write(args.out, header + trace_to_csv(trace))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="winddispatch", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one dispatch instance")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", default="-")
    p.add_argument("--trace", help="write the convergence trace as CSV")

    p = sub.add_parser("sweep", help="re-solve over a grid of one parameter")
    p.add_argument("--config", required=True)
    p.add_argument("--param", required=True, help="e.g. wind_units[*].k_r")
    p.add_argument("--grid", required=True, help="start:stop:num or v1,v2,...")
    p.add_argument("--out", default="-")
    p.add_argument("--seed", type=int, help="master seed (default: config seed)")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("verify", help="check expectations against Monte Carlo")
    p.add_argument("--config", required=True)
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--points", type=int, default=20)
    p.add_argument("--seed", type=int, default=DEFAULT_ORACLE_SEED)
    p.add_argument("--out", default="-")

    p = sub.add_parser("trace", help="re-emit the convergence trace of a solution record")
    p.add_argument("--record", required=True)
    p.add_argument("--out", default="-")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.parser = parser
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")

    if args.command == "trace":
        return cmd_trace(args)
    try:
        cfg = parse_config(args.config)
    except ConfigError as exc:
        print(f"{args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    handler = {"solve": cmd_solve, "sweep": cmd_sweep, "verify": cmd_verify}[args.command]
    return handler(args, cfg)


if __name__ == "__main__":
    sys.exit(main())
