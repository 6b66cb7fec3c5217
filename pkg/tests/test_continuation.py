"""Lifespan arithmetic, the radius schedule, induction runs, envelope comparison."""

import math

import numpy as np
import pytest

from gkdvlab.continuation import (
    ContinuationParams,
    envelope_vs_measured,
    fit_almost_conservation_constant,
    iterate_energy_induction,
    local_timespan,
    schedule_radius,
    schedule_radius_bisect,
    time_step_delta,
)
from gkdvlab.energy import modified_energy
from gkdvlab.errors import ConfigurationError
from gkdvlab.gevrey import GevreyParams, gevrey_norm
from gkdvlab.grid import GridSpec
from gkdvlab.initial_data import gaussian_field, random_analytic_field
from gkdvlab.solver import SolverConfig

GRID = GridSpec(32 * np.pi, 1024)
CFG = SolverConfig(k=4, mu=-1, dt=1e-3, t_final=1.0, grid=GRID, monitor_stride=10)


def make_params(k=4, alpha=0.95, c_ac=2.5e-6, sigma0=0.5, c0=1.0):
    return ContinuationParams(sigma0=sigma0, k=k, c0=c0, c_ac=c_ac, alpha=alpha)


class TestParamsValidation:
    def test_odd_k_rejected(self):
        with pytest.raises(ConfigurationError):
            make_params(k=5)

    def test_focusing_rejected(self):
        with pytest.raises(ConfigurationError):
            ContinuationParams(sigma0=0.5, k=4, c0=1.0, c_ac=1e-6, alpha=0.9, mu=1)

    def test_alpha_strictly_below_limit(self):
        with pytest.raises(ConfigurationError):
            make_params(alpha=1.0)  # limit for k=4
        make_params(alpha=0.999)  # just inside


class TestLifespanArithmetic:
    def test_zero_norm_gives_c0(self):
        p = make_params(c0=0.73)
        assert local_timespan(0.0, p) == 0.73

    def test_norm_doubling_power_law(self):
        p = make_params()
        # multiplying (1 + norm^2) by 2 divides T0 by 2^(k a / 2)
        n1 = 1.0
        n2 = math.sqrt(2.0 * (1.0 + n1**2) - 1.0)
        ratio = local_timespan(n1, p) / local_timespan(n2, p)
        assert ratio == pytest.approx(2.0 ** (0.5 * p.k * p.a), rel=1e-12)

    def test_delta_formula(self):
        p = make_params()
        assert time_step_delta(0.3, p) == pytest.approx(
            p.c0 / (1.0 + 0.6) ** p.a, rel=1e-14
        )


class TestScheduleRadius:
    def test_small_T_clamps_to_sigma0(self):
        p = make_params()
        assert schedule_radius(0.02, 1e-12, p) == p.sigma0

    def test_exact_power_law(self):
        p = make_params()
        e0 = 0.3
        for T in (1e6, 1e8, 1e10):  # far beyond the crossover
            s1 = schedule_radius(e0, T, p)
            s4 = schedule_radius(e0, 4 * T, p)
            assert s1 < p.sigma0
            assert abs(math.log(s4) - math.log(s1) + math.log(4.0) / p.alpha) <= 1e-12

    @pytest.mark.parametrize("k,expected", [(4, 1.0), (6, 6.0 / 5.0), (8, 4.0 / 3.0)])
    def test_limit_exponents(self, k, expected):
        alpha_max = (k + 4) / (2 * k)
        assert abs(1.0 / alpha_max - expected) <= 1e-12

    def test_quadrupling_divides_by_4_to_1_over_alpha(self):
        p = make_params(alpha=0.8)
        e0 = 0.4
        T = 1e9
        ratio = schedule_radius(e0, T, p) / schedule_radius(e0, 4 * T, p)
        assert ratio == pytest.approx(4.0 ** (1.0 / 0.8), rel=1e-12)

    def test_bisection_cross_check(self):
        p = make_params()
        for T in (1e-3, 1.0, 1e7, 1e9):
            closed = schedule_radius(0.15, T, p)
            bis = schedule_radius_bisect(0.15, T, p)
            assert abs(closed - bis) <= 1e-10 * max(closed, 1e-30)


@pytest.fixture(scope="module")
def small_data():
    return random_analytic_field(GRID, seed=101, amplitude=0.02, decay=2.0)


@pytest.fixture(scope="module")
def calibrated(small_data):
    sigmas = np.geomspace(0.5 * 2.0 * 10**-2.5, 0.5 * 2.0, 8)
    c_ac = fit_almost_conservation_constant(small_data, CFG, sigmas, alpha=0.95)
    return make_params(c_ac=c_ac)


class TestInduction:
    def test_three_intervals_margin_ten(self, small_data, calibrated):
        e0 = modified_energy(small_data, calibrated.sigma0, 4, -1)
        delta = time_step_delta(e0, calibrated)
        result = iterate_energy_induction(small_data, 3 * delta, calibrated, CFG)
        assert result.all_bounds_hold
        assert len(result.rows) == 3
        for row in result.rows:
            assert row.margin_growth >= 10.0
            assert row.margin_doubling >= 10.0

    def test_sigma_zero_trivial(self, small_data, calibrated):
        e0 = modified_energy(small_data, calibrated.sigma0, 4, -1)
        delta = time_step_delta(e0, calibrated)
        result = iterate_energy_induction(small_data, delta, calibrated, CFG, sigma=0.0)
        assert result.all_bounds_hold

    def test_single_interval_reproduces_one_step_bound(self, small_data, calibrated):
        # n=1 is the single-interval almost-conservation bound with the fitted C
        e0 = modified_energy(small_data, calibrated.sigma0, 4, -1)
        delta = time_step_delta(e0, calibrated)
        result = iterate_energy_induction(small_data, delta, calibrated, CFG)
        assert len(result.rows) == 1
        row = result.rows[0]
        one_step = result.e_sigma_start + 2 ** (4 + 1) * calibrated.c_ac * (
            result.sigma**calibrated.alpha
        ) * e0 ** (4 / 2 + 1) * (1 + e0 ** (4 / 2))
        assert row.bound_growth == pytest.approx(one_step, rel=1e-12)
        assert row.e_sigma_sup <= one_step

    def test_too_short_horizon_rejected(self, small_data, calibrated):
        with pytest.raises(ConfigurationError):
            iterate_energy_induction(small_data, 1e-9, calibrated, CFG)


class TestEnvelope:
    def test_measured_never_below_calibrated_envelope(self, small_data, calibrated):
        norm0 = gevrey_norm(small_data, GevreyParams(calibrated.sigma0, 1.0))
        t0 = local_timespan(norm0, calibrated)
        sched = envelope_vs_measured(
            small_data, [t0, 2 * t0, 4 * t0, 8 * t0], calibrated, CFG
        )
        assert sched.consistent
        theo = [r.sigma_theoretical for r in sched.rows]
        assert all(b <= a * (1 + 1e-12) for a, b in zip(theo, theo[1:]))
        assert all(t <= calibrated.sigma0 for t in theo)

    def test_gaussian_data_dominates(self, calibrated):
        u0 = gaussian_field(GRID, amplitude=0.02, width=2.0)
        sched = envelope_vs_measured(u0, [0.05, 0.1], calibrated, CFG)
        assert sched.consistent
        assert all(math.isinf(r.sigma_measured) for r in sched.rows)

    def test_collapsed_horizons_rejected(self, small_data, calibrated):
        with pytest.raises(ConfigurationError):
            envelope_vs_measured(small_data, [1e-9, 2e-9], calibrated, CFG)
