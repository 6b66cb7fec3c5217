"""Space-time norms and the inequality ratio probes."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gkdvlab.errors import ConfigurationError
from gkdvlab.initial_data import random_analytic_field
from gkdvlab.probes import (
    EnsembleSpec,
    ProbeParams,
    ProbeResult,
    SpaceTimeField,
    f_bound_probe,
    multilinear_ratio_probe,
    product_holder_probe,
    spacetime_samples,
    spacetime_transform,
    strichartz_probe,
    time_window,
    xsb_norm,
)

SPEC = EnsembleSpec()
PARAMS = ProbeParams(s=0.1, b=0.55, eps=0.05, sigma=0.0, ensemble_size=20, seed=7)


def _random_st_field(seed, spec=SPEC):
    rng = np.random.default_rng(seed)
    u = rng.standard_normal((spec.n_time, spec.grid.n_modes))
    return u, spacetime_transform(u, spec.grid, spec.t_extent)


class TestSpaceTimeField:
    def test_parseval_2d(self):
        u, f = _random_st_field(0)
        phys = np.sum(u**2) * f.grid.dx * f.dt
        spect = np.sum(np.abs(f.coeffs) ** 2) * f.grid.mode_spacing * f.tau_spacing
        assert abs(phys - spect) / phys <= 1e-11

    def test_round_trip(self):
        u, f = _random_st_field(1)
        assert np.max(np.abs(spacetime_samples(f) - u)) < 1e-12

    def test_joint_hermitian_symmetry(self):
        _, f = _random_st_field(2)
        nt, nx = f.coeffs.shape
        reflected = np.conj(
            f.coeffs[(-np.arange(nt)) % nt][:, (-np.arange(nx)) % nx]
        )
        assert np.max(np.abs(f.coeffs - reflected)) <= 1e-11 * np.max(np.abs(f.coeffs))

    def test_shape_validation(self):
        with pytest.raises(ConfigurationError):
            SpaceTimeField(SPEC.grid, 64, 8.0, np.zeros((32, SPEC.n_modes), dtype=complex))


class TestXsbNorm:
    def test_single_mode_closed_form(self):
        c = np.zeros((SPEC.n_time, SPEC.n_modes), dtype=complex)
        c[3, 5] = 2.0
        f = SpaceTimeField(SPEC.grid, SPEC.n_time, SPEC.t_extent, c)
        xi0 = SPEC.grid.wavenumbers[5]
        tau0 = f.taus[3]
        sigma, s, b = 0.1, 0.3, 0.4
        expected = (
            2.0
            * np.sqrt(SPEC.grid.mode_spacing * f.tau_spacing)
            * np.exp(sigma * abs(xi0))
            * (1 + abs(xi0)) ** s
            * (1 + abs(tau0 - xi0**3)) ** b
        )
        assert xsb_norm(f, sigma, s, b) == pytest.approx(expected, rel=1e-12)

    def test_collapses_to_l2(self):
        _, f = _random_st_field(3)
        assert xsb_norm(f, 0.0, 0.0, 0.0) == pytest.approx(f.l2_norm(), rel=1e-11)

    @given(b1=st.floats(-0.5, 0.5), b2=st.floats(-0.5, 0.5))
    @settings(max_examples=20, deadline=None)
    def test_b_monotone(self, b1, b2):
        _, f = _random_st_field(4)
        lo, hi = sorted((b1, b2))
        assert xsb_norm(f, 0.0, 0.0, lo) <= xsb_norm(f, 0.0, 0.0, hi) * (1 + 1e-12)


class TestEnsembleProbes:
    def test_multilinear_zero_member(self):
        # a vanishing factor kills the product: ratio 0 by construction
        zeros = np.zeros((SPEC.n_time, SPEC.n_modes))
        f = spacetime_transform(zeros, SPEC.grid, SPEC.t_extent)
        assert xsb_norm(f, 0.0, 0.1, 0.55) == 0.0

    def test_multilinear_finite_and_refinement_stable(self):
        base = multilinear_ratio_probe(SPEC, PARAMS, 4)
        assert np.all(np.isfinite(base.ratios))
        assert base.max_ratio > 0
        doubled = multilinear_ratio_probe(SPEC.refined(), PARAMS, 4)
        assert doubled.max_ratio / base.max_ratio < 2.0

    def test_multilinear_s_range(self):
        bad = ProbeParams(s=-0.2, ensemble_size=20, seed=1)
        with pytest.raises(ConfigurationError):
            multilinear_ratio_probe(SPEC, bad, 4)

    def test_strichartz_free_evolution_extremizes(self):
        res = strichartz_probe(SPEC, PARAMS)
        assert np.all(np.isfinite(res.ratios))
        # even indices are exact dispersive evolutions (on-characteristic)
        on_char = res.ratios[0::2]
        off_char = res.ratios[1::2]
        assert on_char.max() >= off_char.max()
        doubled = strichartz_probe(SPEC.refined(), PARAMS)
        assert doubled.max_ratio / res.max_ratio < 2.0

    def test_strichartz_needs_b_above_half(self):
        with pytest.raises(ConfigurationError):
            strichartz_probe(SPEC, PARAMS, b=0.5)

    def test_holder_finite_and_refinement_stable(self):
        base = product_holder_probe(SPEC, PARAMS, 4)
        assert base.max_ratio > 0
        doubled = product_holder_probe(SPEC.refined(), PARAMS, 4)
        assert doubled.max_ratio / base.max_ratio < 2.0

    def test_holder_k_range(self):
        with pytest.raises(ConfigurationError):
            product_holder_probe(SPEC, PARAMS, 3)

    def test_determinism_and_superset_monotonicity(self):
        a = multilinear_ratio_probe(SPEC, PARAMS, 4)
        b = multilinear_ratio_probe(SPEC, PARAMS, 4)
        assert np.array_equal(a.ratios, b.ratios)  # bit-for-bit
        bigger = multilinear_ratio_probe(
            SPEC, ProbeParams(s=0.1, b=0.55, eps=0.05, sigma=0.0, ensemble_size=30, seed=7), 4
        )
        assert np.array_equal(bigger.ratios[:20], a.ratios)
        assert bigger.max_ratio >= a.max_ratio

    def test_window_consistency(self):
        # halving the support changes the b=0.4 norm by a bounded factor
        factors = []
        for seed in range(10):
            u, f = _random_st_field(100 + seed)
            base = xsb_norm(f, 0.0, 0.0, 0.4)
            w = time_window(SPEC.n_time, SPEC.t_extent, fraction=0.5)
            half = spacetime_transform(u * w[:, None], SPEC.grid, SPEC.t_extent)
            factors.append(xsb_norm(half, 0.0, 0.0, 0.4) / base)
        fitted = max(factors)
        assert fitted < 2.0
        # a fresh draw stays within the fitted constant (plus slack)
        u, f = _random_st_field(999)
        w = time_window(SPEC.n_time, SPEC.t_extent, fraction=0.5)
        half = spacetime_transform(u * w[:, None], SPEC.grid, SPEC.t_extent)
        assert xsb_norm(half, 0.0, 0.0, 0.4) / xsb_norm(f, 0.0, 0.0, 0.4) <= fitted * 1.25


class TestFBoundProbe:
    def setup_method(self):
        self.u0 = random_analytic_field(SPEC.grid, seed=5, amplitude=0.3, decay=1.5)

    def test_sigma_zero_ratio_zero(self):
        fb = f_bound_probe(self.u0, SPEC, [0.0], alpha=0.9, k=4)
        assert fb.sup_ratio == 0.0 and fb.sup_deriv_ratio == 0.0
        assert fb.rows == [(0.0, 0.0, 0.0)]

    def test_bounded_as_sigma_vanishes(self):
        fb = f_bound_probe(
            self.u0, SPEC, [0.0125, 0.025, 0.05, 0.1, 0.2, 0.4], alpha=0.95, k=4
        )
        ratios = [r for _, r, _ in fb.rows]
        deriv = [d for _, _, d in fb.rows]
        assert np.all(np.isfinite(ratios)) and np.all(np.isfinite(deriv))
        assert fb.sup_ratio > 0 and fb.sup_deriv_ratio > 0
        # no blow-up toward sigma -> 0: the smallest-sigma ratio does not dominate
        assert ratios[0] <= 2.0 * fb.sup_ratio
        assert deriv[0] <= 2.0 * fb.sup_deriv_ratio

    def test_alpha_near_limit_finite(self):
        alpha = (4 + 4) / (2 * 4) - 0.05
        fb = f_bound_probe(self.u0, SPEC, [0.05, 0.2], alpha=alpha, k=4)
        assert np.isfinite(fb.sup_ratio) and fb.sup_ratio > 0

    def test_alpha_range_enforced(self):
        with pytest.raises(ConfigurationError):
            f_bound_probe(self.u0, SPEC, [0.1], alpha=1.2, k=4)
