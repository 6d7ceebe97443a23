"""Solve the base case (400 MW, c=5, k=2, k_r=1, k_p=0) and print the dispatch."""

import json

from _common import arg_parser, load

from winddispatch.solver import solve


def main():
    args = arg_parser(__doc__).parse_args()
    cfg, out = load(args)
    sol = solve(cfg.problem, cfg.pso, cfg.repair_tol, cfg.restarts, cfg.seed, cfg.balance_penalty)
    names = [u.name for u in cfg.problem.thermal_units + cfg.problem.wind_units]
    for name, p in zip(names, sol.schedule):
        print(f"{name:>4} {p:9.3f} MW")
    for key, value in sol.breakdown.as_dict().items():
        print(f"{key:>12} {value:10.3f} $/hr")
    path = out / "base_case.json"
    path.write_text(json.dumps({"config_sha256": cfg.digest, "solution": sol.as_record()}, indent=2, sort_keys=True) + "\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
