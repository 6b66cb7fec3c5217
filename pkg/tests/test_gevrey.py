"""Exponential weights, Gevrey norms, radius estimation."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gkdvlab.errors import (
    AnalyticityExceededError,
    ConfigurationError,
    InsufficientResolutionError,
)
from gkdvlab.gevrey import GevreyParams, estimate_radius, exp_multiplier, gevrey_norm
from gkdvlab.grid import GridSpec, SpectralField, forward_transform
from gkdvlab.initial_data import gaussian_field, sech_field
from helpers import random_real_field, synthetic_decay_field

GRID = GridSpec(32 * np.pi, 2048)


def test_sech_transform_closed_form():
    """Oracle check: the sampled sech transform matches sqrt(pi/2)*sech(pi*xi/2)."""
    f = sech_field(GRID)
    xi = GRID.wavenumbers
    exact = np.sqrt(np.pi / 2) / np.cosh(np.pi * xi / 2)
    sel = exact > 1e-10
    assert np.max(np.abs(f.coeffs[sel].real - exact[sel])) < 1e-12
    assert np.max(np.abs(f.coeffs.imag)) < 1e-13


class TestExpMultiplier:
    def test_sigma_zero_identity(self):
        f = random_real_field(GRID, 1)
        assert np.array_equal(exp_multiplier(f, 0.0).coeffs, f.coeffs)

    def test_synthetic_decay_arithmetic(self):
        f = synthetic_decay_field(GRID, rate=1.0)
        out = exp_multiplier(f, 0.5)
        xi = np.abs(GRID.wavenumbers)
        expected = np.exp(-0.5 * xi)
        kept = np.abs(f.coeffs) >= 1e-12 * np.abs(f.coeffs).max()
        sel = kept & (xi > 0)
        assert np.max(np.abs(out.coeffs[sel].real - expected[sel])) < 1e-13

    def test_sech_sigma_beyond_radius_raises(self):
        # sech has radius pi/2 ~ 1.5708; sigma=2 amplifies the tail
        f = sech_field(GRID)
        with pytest.raises(AnalyticityExceededError):
            exp_multiplier(f, 2.0)

    def test_sigma_below_radius_ok(self):
        f = sech_field(GRID)
        out = exp_multiplier(f, 1.0)
        assert np.all(np.isfinite(out.coeffs))

    def test_negative_sigma_rejected(self):
        with pytest.raises(ConfigurationError):
            exp_multiplier(sech_field(GRID), -0.1)

    @given(
        s1=st.floats(0.05, 0.4),
        s2=st.floats(0.05, 0.4),
    )
    @settings(max_examples=20, deadline=None)
    def test_additive_composition(self, s1, s2):
        f = synthetic_decay_field(GRID, rate=1.2)
        both = exp_multiplier(exp_multiplier(f, s1), s2)
        once = exp_multiplier(f, s1 + s2)
        kept = (np.abs(both.coeffs) > 0) & (np.abs(once.coeffs) > 0)
        rel = np.abs(both.coeffs[kept] - once.coeffs[kept]) / np.abs(once.coeffs[kept])
        assert np.max(rel) < 1e-12

    def test_hermitian_preserved(self):
        from gkdvlab.grid import hermitian_defect

        f = random_real_field(GRID, 3, amplitude=0.3)
        out = exp_multiplier(f, 0.05)
        assert hermitian_defect(out) < 1e-12

    def test_amp_guard_overflow(self):
        f = synthetic_decay_field(GridSpec(np.pi, 64), rate=0.01)
        # sigma*xi_max ~ 30*32 = 960 > default guard 700
        with pytest.raises(AnalyticityExceededError):
            exp_multiplier(f, 30.0)


class TestGevreyNorm:
    def test_zero_field(self):
        z = SpectralField(GRID, np.zeros(GRID.n_modes, dtype=complex))
        assert gevrey_norm(z, GevreyParams(0.3, 1.0)) == 0.0

    def test_sigma_s_zero_is_l2(self):
        f = random_real_field(GRID, 2)
        assert gevrey_norm(f, GevreyParams(0.0, 0.0)) == pytest.approx(
            f.l2_norm(), rel=1e-12
        )

    def test_quadrature_oracle(self):
        # independent weighted quadrature over the same modes
        f = synthetic_decay_field(GRID, rate=1.0)
        params = GevreyParams(0.25, 0.0)
        value = gevrey_norm(f, params)
        mag = np.abs(f.coeffs)
        kept = mag >= params.fit_floor * mag.max()
        xi = np.abs(GRID.wavenumbers[kept])
        oracle_sq = np.sum(np.exp(0.5 * xi) * np.exp(-2.0 * xi)) * GRID.mode_spacing
        assert value == pytest.approx(math.sqrt(oracle_sq), rel=1e-10)

    @given(
        sigma=st.floats(0.0, 0.4),
        sigma_lo=st.floats(0.0, 1.0),
        s_hi=st.floats(-1.0, 2.0),
        s_lo=st.floats(-1.0, 2.0),
    )
    @settings(max_examples=25, deadline=None)
    def test_monotone_in_sigma_and_s(self, sigma, sigma_lo, s_hi, s_lo):
        f = synthetic_decay_field(GRID, rate=1.0)
        lo_sigma = sigma * min(1.0, sigma_lo)
        lo_s, hi_s = sorted((s_lo, s_hi))
        assert gevrey_norm(f, GevreyParams(lo_sigma, lo_s)) <= gevrey_norm(
            f, GevreyParams(sigma, lo_s)
        ) * (1 + 1e-12)
        assert gevrey_norm(f, GevreyParams(sigma, lo_s)) <= gevrey_norm(
            f, GevreyParams(sigma, hi_s)
        ) * (1 + 1e-12)

    def test_embedding_constant(self):
        # ||f||_{sigma', s'} <= C ||f||_{sigma, s} with the explicit grid constant
        from gkdvlab.initial_data import random_analytic_field

        f = random_analytic_field(GRID, seed=5, amplitude=0.2, decay=1.0)
        sigma, s = 0.2, 1.0
        sigma_p, s_p = 0.05, 1.5
        xi = np.abs(GRID.wavenumbers)
        c = np.max((1 + xi) ** (s_p - s) * np.exp((sigma_p - sigma) * xi))
        lhs = gevrey_norm(f, GevreyParams(sigma_p, s_p))
        rhs = gevrey_norm(f, GevreyParams(sigma, s))
        assert lhs <= c * rhs * (1 + 1e-12)


class TestEstimateRadius:
    def test_sech_radius(self):
        f = sech_field(GRID)
        r = estimate_radius(f, GevreyParams(0.0))
        assert abs(r - np.pi / 2) <= 0.05 * (np.pi / 2)

    @pytest.mark.parametrize("a", [0.5, 2.0])
    def test_scaled_sech(self, a):
        f = sech_field(GRID, width=a)
        r = estimate_radius(f, GevreyParams(0.0))
        assert abs(r - a * np.pi / 2) <= 0.05 * (a * np.pi / 2)

    def test_gaussian_superexponential(self):
        f = gaussian_field(GRID, width=2.0)
        assert estimate_radius(f, GevreyParams(0.0)) == math.inf

    def test_translation_invariance(self):
        # translate in coefficient space: |uhat| is unchanged bit for bit
        f1 = sech_field(GRID)
        shift = np.exp(1j * GRID.wavenumbers * 5.37)
        f2 = SpectralField(GRID, f1.coeffs * shift)
        r1 = estimate_radius(f1, GevreyParams(0.0))
        r2 = estimate_radius(f2, GevreyParams(0.0))
        assert abs(r1 - r2) <= 1e-10 * r1

    def test_multiplier_shifts_estimate(self):
        f = sech_field(GRID)
        tau = 0.4
        r0 = estimate_radius(f, GevreyParams(0.0))
        r1 = estimate_radius(exp_multiplier(f, tau), GevreyParams(0.0))
        assert abs((r0 - r1) - tau) <= 0.05 * tau + 0.01 * r0

    def test_zero_field_rejected(self):
        z = SpectralField(GRID, np.zeros(GRID.n_modes, dtype=complex))
        with pytest.raises(ConfigurationError):
            estimate_radius(z, GevreyParams(0.0))

    def test_insufficient_modes(self):
        g = GridSpec(np.pi, 16)
        f = synthetic_decay_field(g, rate=5.0)
        with pytest.raises(InsufficientResolutionError):
            estimate_radius(f, GevreyParams(0.0))
