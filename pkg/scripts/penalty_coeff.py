"""Dispatch against the penalty coefficient k_p.

Runs three families: k_r=0 for every c in the default grid, k_r in {0, 60}
at c=5, and k_r=20 at c in {10, 20}.
"""

from _common import arg_parser, load, setting, sweep

from winddispatch.experiments import DEFAULT_C_GRID, DEFAULT_KP_GRID


def main():
    args = arg_parser(__doc__).parse_args()
    cfg, out = load(args)
    cases = [(0.0, c) for c in DEFAULT_C_GRID] + [(60.0, 5.0), (20.0, 10.0), (20.0, 20.0)]
    for k_r, c in cases:
        problem = setting(cfg.problem, k_r=k_r, scale_c=c)
        sweep(cfg, problem, "wind_units[*].k_p", DEFAULT_KP_GRID,
              out / f"k_p_kr{k_r:g}_c{c:g}.csv", args.workers, k_r=k_r, scale_c=c)


if __name__ == "__main__":
    main()
