"""Conserved functionals, weighted energy, commutator remainder, scaling sweep."""

import numpy as np
import pytest

from gkdvlab.energy import (
    almost_conservation_sweep,
    commutator_remainder,
    energy,
    energy_reports,
    h1_gevrey_energy,
    mass,
    modified_energy,
    remainder_integral,
)
from gkdvlab.errors import ConfigurationError
from gkdvlab.gevrey import GevreyParams, gevrey_norm
from gkdvlab.grid import GridSpec, SpectralField, forward_transform
from gkdvlab.initial_data import random_analytic_field
from gkdvlab.solver import SolverConfig, simulate

GRID = GridSpec(32 * np.pi, 1024)
SMALL = GridSpec(np.pi, 64)


class TestMass:
    def test_zero(self):
        assert mass(SpectralField(GRID, np.zeros(GRID.n_modes, dtype=complex))) == 0.0

    def test_cosine_on_unit_circle_grid(self):
        f = forward_transform(np.cos(SMALL.points), SMALL)
        assert mass(f) == pytest.approx(np.pi, rel=1e-13)


class TestEnergy:
    def test_zero(self):
        z = SpectralField(GRID, np.zeros(GRID.n_modes, dtype=complex))
        assert energy(z, 4, -1) == 0.0

    def test_defocusing_even_k_positive(self):
        f = random_analytic_field(GRID, seed=4, amplitude=0.3, decay=1.5)
        e = energy(f, 4, -1)
        xi = GRID.derivative_wavenumbers
        grad_sq = float(np.sum(xi**2 * np.abs(f.coeffs) ** 2)) * GRID.mode_spacing
        assert e >= grad_sq > 0.0


class TestModifiedEnergy:
    def test_sigma_zero_collapse(self):
        for seed in (1, 2, 3):
            f = random_analytic_field(GRID, seed=seed, amplitude=0.4, decay=1.5)
            collapsed = modified_energy(f, 0.0, 4, -1)
            direct = mass(f) + energy(f, 4, -1)
            assert collapsed == pytest.approx(direct, rel=1e-12)

    def test_defocusing_lower_bound(self):
        f = random_analytic_field(GRID, seed=7, amplitude=0.3, decay=2.0)
        sigma = 0.4
        e_sig = modified_energy(f, sigma, 4, -1)
        quad = h1_gevrey_energy(f, sigma)
        # exact domination of the quadratic part, and of the equivalent
        # (1+|xi|)-weighted norm up to its factor-2 equivalence constant
        assert e_sig >= quad
        assert e_sig >= 0.5 * gevrey_norm(f, GevreyParams(sigma, 1.0)) ** 2

    def test_power_term_scales_like_amplitude_k_plus_2(self):
        k, sigma = 4, 0.3
        amps = np.array([0.05, 0.1, 0.2])
        gaps = []
        for a in amps:
            f = random_analytic_field(GRID, seed=11, amplitude=float(a), decay=2.0)
            gaps.append(modified_energy(f, sigma, k, -1) - h1_gevrey_energy(f, sigma))
        slope = np.polyfit(np.log(amps), np.log(gaps), 1)[0]
        assert abs(slope - (k + 2)) < 0.2


class TestCommutatorRemainder:
    def test_sigma_zero_identically_zero(self):
        f = random_analytic_field(GRID, seed=8, amplitude=0.3, decay=2.0)
        rem = commutator_remainder(f, 0.0, 4, -1)
        assert np.max(np.abs(rem.coeffs)) <= 1e-12

    def test_no_mean(self):
        f = random_analytic_field(GRID, seed=9, amplitude=0.3, decay=2.0)
        rem = commutator_remainder(f, 0.2, 4, -1)
        assert rem.coeffs[0] == 0.0  # exact: the outer derivative kills it

    def test_first_order_vanishing_in_sigma(self):
        f = random_analytic_field(GRID, seed=10, amplitude=0.3, decay=2.0)
        sigmas = np.array([0.0025, 0.005, 0.01, 0.02, 0.04])
        norms = []
        for s in sigmas:
            rem = commutator_remainder(f, float(s), 4, -1)
            norms.append(SpectralField(GRID, rem.coeffs).l2_norm())
        norms = np.array(norms)
        slope = np.polyfit(np.log(sigmas), np.log(norms), 1)[0]
        assert slope >= 0.9
        ratios = norms / sigmas
        assert ratios.max() / ratios.min() < 1.5  # ||F||/sigma approaches a limit


class TestRemainderIntegral:
    def _states(self, dt, t_final, stride, seed=21, amplitude=0.2):
        cfg = SolverConfig(
            k=4, mu=-1, dt=dt, t_final=t_final, grid=GRID, monitor_stride=stride
        )
        u0 = random_analytic_field(GRID, seed=seed, amplitude=amplitude, decay=2.0)
        res = simulate(u0, cfg, GevreyParams(0.0), keep_states=True)
        return res.states, res.times

    def test_sigma_zero_identically_zero(self):
        states, times = self._states(1e-3, 0.02, 2)
        r = remainder_integral(states, times, 0.0, 4, -1)
        assert np.all(r == 0.0)

    def test_spacing_precondition(self):
        states, times = self._states(1e-3, 0.1, 50)  # spacing 0.05 > 0.01
        with pytest.raises(ConfigurationError):
            remainder_integral(states, times, 0.1, 4, -1)

    def test_identity_residual_within_step_halving_estimate(self):
        sigma = 0.3
        coarse_states, coarse_times = self._states(1e-3, 0.2, 10)
        fine_states, fine_times = self._states(5e-4, 0.2, 10)
        coarse = energy_reports(coarse_states, coarse_times, sigma, 4, -1)
        fine = energy_reports(fine_states, fine_times, sigma, 4, -1)
        fine_by_t = {round(t, 12): r for t, r in zip(fine_times, fine)}
        floor = 1e-15 * coarse[0].e_sigma
        for t, row in zip(coarse_times, coarse):
            twin = fine_by_t[round(t, 12)]
            x_c = row.e_sigma - coarse[0].e_sigma - row.r_sigma
            x_f = twin.e_sigma - fine[0].e_sigma - twin.r_sigma
            estimate = (4.0 / 3.0) * abs(x_c - x_f)
            assert abs(x_c) <= 10.0 * estimate + floor


class TestGagliardoNirenbergBound:
    def test_fitted_constant_holds_across_ensemble(self):
        k, sigma = 4, 0.3
        params = GevreyParams(sigma, 1.0)
        rng = np.random.default_rng(77)
        samples = []
        for i in range(20):
            amp = float(rng.uniform(0.05, 0.5))
            dec = float(rng.uniform(1.5, 3.0))
            samples.append(random_analytic_field(GRID, seed=1000 + i, amplitude=amp, decay=dec))
        power_terms, quads, norms = [], [], []
        for f in samples:
            e_sig = modified_energy(f, sigma, k, -1)
            quad = h1_gevrey_energy(f, sigma)
            power_terms.append(e_sig - quad)  # = positive L^(k+2) part
            quads.append(quad)
            norms.append(gevrey_norm(f, params))
        # the interpolation bound: power term <= C * (H1-type energy)^((k+2)/2);
        # fit C on the first half, double for safety, verify on all
        c_fit = 2.0 * max(
            p / q ** ((k + 2) / 2) for p, q in zip(power_terms[:10], quads[:10])
        )
        assert c_fit > 0
        for p, q in zip(power_terms, quads):
            assert p <= c_fit * q ** ((k + 2) / 2) * (1 + 1e-9)
        # consequently the stated form with the (1+|xi|)-weighted norm holds too
        for p, q, n in zip(power_terms, quads, norms):
            assert q + p <= n**2 + c_fit * n ** (k + 2)


class TestAlmostConservationSweep:
    def test_monotone_and_slope(self):
        u0 = random_analytic_field(GRID, seed=11, amplitude=0.4, decay=2.0)
        cfg = SolverConfig(k=4, mu=-1, dt=2e-3, t_final=0.5, grid=GRID, monitor_stride=25)
        sigmas = np.geomspace(3.2e-3, 1.0, 6)
        sweep = almost_conservation_sweep(u0, cfg, GevreyParams(0.0), sigmas)
        assert np.all(np.diff(sweep.deviations) >= 0)
        assert np.all(sweep.deviations >= 0)
        assert sweep.slope >= 0.85
        alpha = (4 + 4) / (2 * 4) - 0.05
        assert np.isfinite(sweep.fitted_constant(alpha, 4))

    def test_needs_two_sigmas(self):
        u0 = random_analytic_field(GRID, seed=11, amplitude=0.4, decay=2.0)
        cfg = SolverConfig(k=4, mu=-1, dt=2e-3, t_final=0.1, grid=GRID)
        with pytest.raises(ConfigurationError):
            almost_conservation_sweep(u0, cfg, GevreyParams(0.0), [0.1])
