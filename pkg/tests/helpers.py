"""Shared helpers for the test suite."""

import numpy as np

from gkdvlab.grid import GridSpec, SpectralField, forward_transform


def random_real_field(grid: GridSpec, seed: int, amplitude: float = 1.0) -> SpectralField:
    rng = np.random.default_rng(seed)
    return forward_transform(amplitude * rng.standard_normal(grid.n_modes), grid)


def synthetic_decay_field(grid: GridSpec, rate: float, prefactor: float = 1.0) -> SpectralField:
    """Field with coefficients exactly prefactor * exp(-rate * |xi|), real and even."""
    coeffs = prefactor * np.exp(-rate * np.abs(grid.wavenumbers)).astype(np.complex128)
    coeffs[grid.n_modes // 2] = 0.0
    return SpectralField(grid, coeffs)


def rel_l2_error(a: SpectralField, b: SpectralField) -> float:
    diff = np.linalg.norm(a.coeffs - b.coeffs)
    return float(diff / np.linalg.norm(b.coeffs))
