"""Critical reserve coefficient of each wind unit at c=5 and c=20."""

import csv

from _common import arg_parser, load, setting

from winddispatch.experiments import CRITICAL_DROP, CRITICAL_TOL, NoTransitionError, find_critical_kr


def main():
    args = arg_parser(__doc__).parse_args()
    cfg, out = load(args)
    problem = setting(cfg.problem, k_p=0.0)
    path = out / "critical_kr.csv"
    with path.open("w", newline="") as fh:
        fh.write(f"# config_sha256={cfg.digest}\n# seed={cfg.seed}\n# tol={CRITICAL_TOL}\n# drop={CRITICAL_DROP}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["scale_c", "unit", "critical_k_r"])
        for c in (5.0, 20.0):
            for j, unit in enumerate(problem.wind_units):
                try:
                    value = find_critical_kr(problem, j, scale_c=c, pso=cfg.pso, restarts=cfg.restarts, seed=cfg.seed)
                except NoTransitionError:
                    value = None
                print(f"c={c:g} {unit.name}: {value if value is None else round(value, 3)}")
                writer.writerow([c, unit.name, "" if value is None else repr(value)])
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
