#!/usr/bin/env python3
"""Calibrate the frozen continuation constants.

Produces, per k:
  c0    largest lifespan constant <= 1 for which the factor-two Gevrey-norm
        growth criterion holds over T0 on a 10-sample ensemble
  C_ac  sweep-fitted almost-conservation constant x 4 (safety)

The values printed here are what the checked-in configs carry.  Rerun after
any solver change that could move the constants.

Usage: python scripts/calibrate_constants.py [--quick]
"""

import argparse
import sys

import numpy as np

sys.path.insert(0, "src")

from gkdvlab.continuation import (
    ContinuationParams,
    calibrate_c0,
    fit_almost_conservation_constant,
)
from gkdvlab.gevrey import GevreyParams, estimate_radius
from gkdvlab.grid import GridSpec
from gkdvlab.initial_data import random_analytic_field
from gkdvlab.solver import SolverConfig


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="5 samples instead of 10")
    args = parser.parse_args()
    n_samples = 5 if args.quick else 10

    grid = GridSpec(32 * np.pi, 1024)
    for k in (4, 6):
        cfg = SolverConfig(k=k, mu=-1, dt=1e-3, t_final=1.0, grid=grid, monitor_stride=10)
        alpha = (k + 4) / (2 * k) - 0.05

        u_fit = random_analytic_field(grid, seed=101, amplitude=0.02, decay=2.0)
        radius = estimate_radius(u_fit, GevreyParams(0.0))
        top = 0.5 * radius
        c_ac = fit_almost_conservation_constant(
            u_fit, cfg, np.geomspace(top * 10**-2.5, top, 8), alpha=alpha
        )

        samples = [
            random_analytic_field(grid, seed=300 + i, amplitude=0.02 + 0.01 * i, decay=2.0)
            for i in range(n_samples)
        ]
        params = ContinuationParams(sigma0=0.5, k=k, c0=1.0, c_ac=c_ac, alpha=alpha)
        c0 = calibrate_c0(samples, params, cfg)
        print(f"k={k}: c0={c0!r}  C_ac={c_ac!r}  (alpha={alpha!r}, sigma0=0.5)")


if __name__ == "__main__":
    main()
