"""Dispatch against the reserve coefficient k_r, at c=5 and c=20 (k_p=0)."""

from _common import arg_parser, load, setting, sweep

from winddispatch.experiments import DEFAULT_KR_GRID


def main():
    args = arg_parser(__doc__).parse_args()
    cfg, out = load(args)
    for c in (5.0, 20.0):
        problem = setting(cfg.problem, scale_c=c, k_p=0.0)
        sweep(cfg, problem, "wind_units[*].k_r", DEFAULT_KR_GRID, out / f"k_r_c{c:g}.csv", args.workers, scale_c=c)


if __name__ == "__main__":
    main()
