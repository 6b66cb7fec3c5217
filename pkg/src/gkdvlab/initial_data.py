"""Initial-condition factories shared by the experiments and the test suite.

Localized profiles (soliton, sech, gaussian) stand in for whole-line data on
the periodic box; the boundary guard refuses profiles whose tails have not
decayed to numerical irrelevance at the edges.  The random-analytic family is
periodic by construction and needs no guard: its coefficients decay at an
exact, known exponential rate, which makes it the reference input for the
radius estimator and the weighted-energy studies.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigurationError
from .grid import (
    GridSpec,
    SpectralField,
    forward_transform,
    inverse_transform,
    projected_transform,
)

__all__ = ["sech_field", "gaussian_field", "random_analytic_field", "boundary_guard"]

BOUNDARY_TOL = 1e-10


def boundary_guard(samples: np.ndarray, label: str):
    edge = max(abs(float(samples[0])), abs(float(samples[-1])))
    peak = float(np.max(np.abs(samples)))
    if peak > 0 and edge > BOUNDARY_TOL * peak:
        raise ConfigurationError(
            f"{label} has relative boundary amplitude {edge / peak:.2e} > {BOUNDARY_TOL:g}; "
            "enlarge half_length"
        )


def sech_field(grid: GridSpec, amplitude: float = 1.0, width: float = 1.0, x0: float = 0.0) -> SpectralField:
    """amplitude * sech((x - x0)/width); radius of analyticity = width * pi/2."""
    profile = lambda x: amplitude / np.cosh((x - x0) / width)
    boundary_guard(profile(grid.points), "sech profile")
    return projected_transform(profile, grid)


def gaussian_field(grid: GridSpec, amplitude: float = 1.0, width: float = 1.0, x0: float = 0.0) -> SpectralField:
    """Entire initial data: the radius estimator must report +inf on it."""
    profile = lambda x: amplitude * np.exp(-((x - x0) ** 2) / (2.0 * width**2))
    boundary_guard(profile(grid.points), "gaussian profile")
    return projected_transform(profile, grid)


def random_analytic_field(
    grid: GridSpec,
    seed: int,
    amplitude: float = 0.1,
    decay: float = 2.0,
) -> SpectralField:
    """Random real field with |uhat| ~ exp(-decay * |xi|): radius = decay.

    Mean-zero, Nyquist-free, scaled so max|u| equals amplitude.  The same
    seed always produces the same field.
    """
    if decay <= 0:
        raise ConfigurationError(f"decay must be positive, got {decay}")
    n = grid.n_modes
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0x67DE]))
    xi = grid.wavenumbers
    coeffs = np.zeros(n, dtype=np.complex128)
    z = rng.standard_normal(n // 2 - 1) + 1j * rng.standard_normal(n // 2 - 1)
    coeffs[1 : n // 2] = z * np.exp(-decay * np.abs(xi[1 : n // 2]))
    coeffs[n // 2 + 1 :] = np.conj(coeffs[1 : n // 2][::-1])
    field = SpectralField(grid, coeffs)
    u = inverse_transform(field)
    peak = float(np.max(np.abs(u)))
    if peak == 0.0:
        raise ConfigurationError("degenerate random field (zero peak)")
    return forward_transform(u * (amplitude / peak), grid)
