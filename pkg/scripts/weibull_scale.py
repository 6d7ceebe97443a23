"""Dispatch against the Weibull scale c for reserve coefficients 1, 10 and 100."""

from _common import arg_parser, load, setting, sweep

from winddispatch.experiments import DEFAULT_C_GRID

KR_VALUES = (1.0, 10.0, 100.0)


def main():
    args = arg_parser(__doc__).parse_args()
    cfg, out = load(args)
    for k_r in KR_VALUES:
        problem = setting(cfg.problem, k_r=k_r, k_p=0.0)
        sweep(cfg, problem, "wind_units[*].scale_c", DEFAULT_C_GRID,
              out / f"scale_c_kr{k_r:g}.csv", args.workers, k_r=k_r)


if __name__ == "__main__":
    main()
