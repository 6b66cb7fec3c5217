"""Small shared numerics."""

from __future__ import annotations

import numpy as np


def least_squares_slope(x, y) -> tuple[float, float]:
    """Plain mean-centered least-squares line fit, (slope, intercept).

    Kept as the explicit textbook formula (not a library solver) so that the
    figure tooling can reproduce the value bit-for-bit from CSV columns.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xm = float(np.mean(x))
    ym = float(np.mean(y))
    denom = float(np.sum((x - xm) ** 2))
    if denom == 0.0:
        return 0.0, ym
    slope = float(np.sum((x - xm) * (y - ym))) / denom
    return slope, ym - slope * xm
