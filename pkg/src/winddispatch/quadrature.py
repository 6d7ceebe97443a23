"""Adaptive composite Simpson quadrature."""

from __future__ import annotations

import math
import warnings
from typing import Callable

DEFAULT_RTOL = 1e-8
MAX_INTERVALS = 200_000
MAX_DEPTH = 60


class QuadratureWarning(RuntimeWarning):
    pass


def _simpson(fa: float, fm: float, fb: float, h: float) -> float:
    return h * (fa + 4.0 * fm + fb) / 6.0


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    rtol: float = DEFAULT_RTOL,
    atol: float = 1e-15,
    max_intervals: int = MAX_INTERVALS,
) -> float:
    """Integrate ``f`` over ``[a, b]`` with adaptive Simpson refinement.

    The tolerance is relative to a coarse 8-panel estimate of the integral,
    floored at ``atol``. Each accepted panel carries a share of the error
    budget proportional to its width. Richardson extrapolation is applied to
    every accepted panel. If ``max_intervals`` panels are processed before
    convergence, the best available estimate is returned with a warning.
    """
    if a == b:
        return 0.0
    if b < a:
        return -adaptive_simpson(f, b, a, rtol, atol, max_intervals)

    n0 = 8
    h0 = (b - a) / n0
    xs = [a + i * h0 / 2.0 for i in range(2 * n0 + 1)]
    xs[-1] = b
    ys = [f(x) for x in xs]
    coarse = sum(_simpson(ys[2 * i], ys[2 * i + 1], ys[2 * i + 2], h0) for i in range(n0))
    tol = max(atol, rtol * abs(coarse))
    width = b - a

    stack = [
        (xs[2 * i], xs[2 * i + 2], ys[2 * i], ys[2 * i + 1], ys[2 * i + 2], 0)
        for i in range(n0 - 1, -1, -1)
    ]
    total = 0.0
    processed = 0
    capped = False
    while stack:
        lo, hi, flo, fmid, fhi, depth = stack.pop()
        processed += 1
        mid = 0.5 * (lo + hi)
        h = hi - lo
        whole = _simpson(flo, fmid, fhi, h)
        fl = f(0.5 * (lo + mid))
        fr = f(0.5 * (mid + hi))
        left = _simpson(flo, fl, fmid, 0.5 * h)
        right = _simpson(fmid, fr, fhi, 0.5 * h)
        err = left + right - whole
        local_tol = tol * h / width
        if abs(err) <= 15.0 * local_tol or depth >= MAX_DEPTH or processed >= max_intervals:
            if abs(err) > 15.0 * local_tol:
                capped = True
            total += left + right + err / 15.0
            continue
        stack.append((mid, hi, fmid, fr, fhi, depth + 1))
        stack.append((lo, mid, flo, fl, fmid, depth + 1))

    if capped:
        warnings.warn(
            f"adaptive_simpson hit its subdivision cap on [{a}, {b}]",
            QuadratureWarning,
            stacklevel=2,
        )
    if not math.isfinite(total):
        raise ValueError(f"non-finite integral on [{a}, {b}]")
    return total
