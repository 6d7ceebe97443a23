"""Base-case dispatch over a range of system loads."""

import numpy as np
from _common import arg_parser, load, sweep


def main():
    p = arg_parser(__doc__)
    p.add_argument("--loads", default="300:420:7", help="start:stop:num")
    args = p.parse_args()
    cfg, out = load(args)
    start, stop, num = args.loads.split(":")
    grid = tuple(np.linspace(float(start), float(stop), int(num)))
    sweep(cfg, cfg.problem, "load", grid, out / "load_scaling.csv", args.workers)


if __name__ == "__main__":
    main()
