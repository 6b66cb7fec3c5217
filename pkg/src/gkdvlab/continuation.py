"""Radius-decay schedule and its comparison against measured simulations.

The local theory gives a lifespan T0 ~ c0 (1 + ||u0||^2)^(-k a / 2) on which
the radius is preserved; covering [0, T] by n = T/delta short intervals and
letting the weighted energy grow by at most a factor two forces

    2^(k+2) (T/delta) C sigma^alpha E0^(k/2) (1 + E0^(k/2)) <= 1,

whose saturation yields the closed-form schedule
sigma(T) = min(sigma0, c1 T^(-1/alpha)).  This module evaluates that
arithmetic exactly (in log space), runs the induction numerically interval by
interval, and compares the scheduled envelope against the radius measured on
actual solutions.

c0 and C_ac are calibration products (scripts/calibrate_constants.py), not
derived values: c0 is the largest constant <= 1 for which the factor-two
norm-growth criterion holds on a data ensemble, and C_ac is the sweep-fitted
almost-conservation constant times a safety factor of four.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .energy import almost_conservation_sweep, modified_energy
from .errors import ConfigurationError
from .gevrey import GevreyParams, estimate_radius, gevrey_norm
from .grid import SpectralField

__all__ = [
    "ContinuationParams",
    "RadiusSchedule",
    "ScheduleRow",
    "InductionResult",
    "local_timespan",
    "time_step_delta",
    "schedule_radius",
    "schedule_radius_bisect",
    "iterate_energy_induction",
    "envelope_vs_measured",
    "calibrate_c0",
    "fit_almost_conservation_constant",
]

# Largest admissible lifespan constant: the local estimate is stated for
# times <= 1, so the calibration search is capped here.
DEFAULT_C0 = 1.0

ENVELOPE_SAFETY = 0.9  # headroom for radius-estimator variance when calibrating


@dataclass(frozen=True)
class ContinuationParams:
    sigma0: float
    k: int
    c0: float
    c_ac: float
    alpha: float
    mu: int = -1
    s: float = 1.0
    a: float = 20.0  # 1/(b'-b) with the default eps = 0.05

    def __post_init__(self):
        if self.mu != -1:
            raise ConfigurationError("the continuation argument covers only mu = -1")
        if self.k < 4 or self.k % 2 != 0:
            raise ConfigurationError(f"k must be even and >= 4, got {self.k}")
        if self.sigma0 <= 0:
            raise ConfigurationError(f"sigma0 must be positive, got {self.sigma0}")
        if self.s <= (self.k - 4) / (2 * self.k):
            raise ConfigurationError(
                f"s must exceed (k-4)/(2k) = {(self.k - 4) / (2 * self.k):g}"
            )
        if self.a <= 1:
            raise ConfigurationError(f"a must exceed 1, got {self.a}")
        if self.c0 <= 0 or self.c_ac <= 0:
            raise ConfigurationError("c0 and c_ac must be positive")
        if not (0.0 < self.alpha < self.alpha_max):
            raise ConfigurationError(
                f"alpha must lie in (0, {self.alpha_max:g}) strictly, got {self.alpha}"
            )

    @property
    def alpha_max(self) -> float:
        return (self.k + 4) / (2 * self.k)


def local_timespan(u0_norm: float, params: ContinuationParams) -> float:
    """Lifespan T0 = c0 / (1 + ||u0||^2)^(k a / 2) of the radius-preserving step."""
    if u0_norm < 0:
        raise ConfigurationError("norm must be >= 0")
    return params.c0 / (1.0 + u0_norm**2) ** (0.5 * params.k * params.a)


def time_step_delta(e0: float, params: ContinuationParams) -> float:
    """Induction time step delta = c0 / (1 + 2 E0)^a (energy form, s = 1)."""
    if e0 < 0:
        raise ConfigurationError("E0 must be >= 0")
    return params.c0 / (1.0 + 2.0 * e0) ** params.a


def _log_c1(e0: float, params: ContinuationParams) -> float:
    """log of the schedule prefactor c1 (evaluated in log space for range)."""
    k = params.k
    delta = time_step_delta(e0, params)
    denom = (
        (k + 2) * math.log(2.0)
        + math.log(params.c_ac)
        + 0.5 * k * math.log(e0)
        + math.log1p(e0 ** (0.5 * k))
    )
    return (math.log(delta) - denom) / params.alpha


def schedule_radius(e0: float, T: float, params: ContinuationParams) -> float:
    """min(sigma0, c1 * T^(-1/alpha)): the scheduled radius at horizon T."""
    if T <= 0:
        raise ConfigurationError(f"T must be positive, got {T}")
    if e0 <= 0:
        raise ConfigurationError(f"E0 must be positive, got {e0}")
    log_val = _log_c1(e0, params) - math.log(T) / params.alpha
    if log_val >= math.log(params.sigma0):
        return params.sigma0
    return math.exp(log_val)


def schedule_radius_bisect(
    e0: float, T: float, params: ContinuationParams, log_tol: float = 1e-12
) -> float:
    """Solve the saturated smallness condition by bisection (cross-check).

    Finds sigma with 2^(k+2) (T/delta) C sigma^alpha E0^(k/2) (1+E0^(k/2)) = 1,
    clamped at sigma0 when the condition already holds there.  Bisects in
    log(sigma) so the result carries relative precision at any scale.
    """
    k = params.k
    delta = time_step_delta(e0, params)
    log_coeff = (
        (k + 2) * math.log(2.0)
        + math.log(T / delta)
        + math.log(params.c_ac)
        + 0.5 * k * math.log(e0)
        + math.log1p(e0 ** (0.5 * k))
    )

    def excess(log_sig: float) -> float:
        return log_coeff + params.alpha * log_sig

    hi = math.log(params.sigma0)
    if excess(hi) <= 0:
        return params.sigma0
    lo = hi - 1.0
    while excess(lo) > 0:
        lo -= max(1.0, excess(lo) / params.alpha)
    while hi - lo > log_tol:
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0:
            hi = mid
        else:
            lo = mid
    return math.exp(0.5 * (lo + hi))


@dataclass(frozen=True)
class InductionRow:
    j: int
    t: float
    e_sigma_sup: float
    bound_growth: float  # j-linear growth bound on E_sigma
    bound_doubling: float  # 2 * E_sigma0(0)
    margin_growth: float
    margin_doubling: float
    ok: bool


@dataclass
class InductionResult:
    sigma: float
    delta: float
    e0: float
    e_sigma_start: float
    rows: list[InductionRow]
    findings: list[str]

    @property
    def all_bounds_hold(self) -> bool:
        return not self.findings


def iterate_energy_induction(
    u0: SpectralField,
    T: float,
    params: ContinuationParams,
    cfg,
    sigma: float | None = None,
) -> InductionResult:
    """Chain the local solver over n = floor(T/delta) intervals of length delta
    and check, at every j*delta, the two induction bounds

        sup_[0, j delta] E_sigma <= E_sigma(0)
            + 2^(k+1) C sigma^alpha j E0^(k/2+1) (1 + E0^(k/2)),
        sup_[0, j delta] E_sigma <= 2 E0,

    with E0 = E_sigma0(0).  Violations are reported as findings, not raised:
    they mean the fitted constant was too small or quadrature error dominates.
    """
    from .solver import SolverConfig, simulate

    k = params.k
    e0 = modified_energy(u0, params.sigma0, k, params.mu)
    delta = time_step_delta(e0, params)
    n = int(math.floor(T / delta + 1e-9))
    if n < 1:
        raise ConfigurationError(f"T={T:g} is shorter than one induction step delta={delta:g}")
    sig = schedule_radius(e0, T, params) if sigma is None else float(sigma)

    steps_per = max(1, math.ceil(delta / cfg.dt - 1e-12))
    dt_eff = delta / steps_per
    sub_cfg = SolverConfig(
        k=k,
        mu=params.mu,
        dt=dt_eff,
        t_final=delta,
        grid=cfg.grid,
        monitor_stride=min(cfg.monitor_stride, steps_per),
        noise_floor=cfg.noise_floor,
        skew_symmetric=cfg.skew_symmetric,
    )
    gev = GevreyParams(sig)

    e_start = modified_energy(u0, sig, k, params.mu)
    growth_unit = (
        2.0 ** (k + 1)
        * params.c_ac
        * sig**params.alpha
        * e0 ** (0.5 * k + 1)
        * (1.0 + e0 ** (0.5 * k))
    )
    floor = 1e-15 * max(1.0, abs(e_start))

    rows: list[InductionRow] = []
    findings: list[str] = []
    sup = e_start
    current = u0
    for j in range(1, n + 1):
        res = simulate(current, sub_cfg, gev)
        sup = max(sup, max(r.e_sigma for r in res.records))
        current = res.final.field
        bound1 = e_start + growth_unit * j
        bound2 = 2.0 * e0
        dev = max(sup - e_start, floor)
        margin1 = (growth_unit * j) / dev
        margin2 = (bound2 - e_start) / dev
        ok = sup <= bound1 * (1 + 1e-12) and sup <= bound2 * (1 + 1e-12)
        rows.append(
            InductionRow(j, j * delta, sup, bound1, bound2, margin1, margin2, ok)
        )
        if not ok:
            findings.append(
                f"induction bound violated at j={j} (t={j * delta:g}): "
                f"sup={sup:.6g}, growth bound={bound1:.6g}, doubling bound={bound2:.6g}"
            )
    return InductionResult(sig, delta, e0, e_start, rows, findings)


@dataclass(frozen=True)
class ScheduleRow:
    T: float
    sigma_theoretical: float
    sigma_measured: float
    delta: float
    n_steps: int
    e_sigma_sup: float
    bound_margin: float


@dataclass
class RadiusSchedule:
    rows: list[ScheduleRow]
    sigma0: float
    calibration: float  # prefactor applied to the raw schedule at T = T_list[0]

    def __post_init__(self):
        theo = [r.sigma_theoretical for r in self.rows]
        if any(b > a * (1 + 1e-12) for a, b in zip(theo, theo[1:])):
            raise ConfigurationError("schedule must be nonincreasing in T")
        if any(t > self.sigma0 * (1 + 1e-12) for t in theo):
            raise ConfigurationError("schedule may never exceed sigma0")

    @property
    def consistent(self) -> bool:
        return all(
            r.sigma_measured >= r.sigma_theoretical * (1 - 1e-9) for r in self.rows
        )


def envelope_vs_measured(
    u0: SpectralField,
    T_list,
    params: ContinuationParams,
    cfg,
    gevrey: GevreyParams | None = None,
) -> RadiusSchedule:
    """Measure the radius along one run at increasing horizons and compare to
    the schedule, after one global calibration of the prefactor at the first
    horizon (with a fixed safety factor for estimator variance).

    Horizons are rounded to whole solver steps; the run is chained, which is
    bit-identical to separate runs of the same step counts.
    """
    from .solver import SolverConfig, simulate

    if gevrey is None:
        gevrey = GevreyParams(0.0)
    T_sorted = sorted(float(t) for t in T_list)
    if not T_sorted or T_sorted[0] <= 0:
        raise ConfigurationError("horizons must be positive")
    steps = [max(1, int(round(t / cfg.dt))) for t in T_sorted]
    if any(b <= a for a, b in zip(steps, steps[1:])):
        raise ConfigurationError("horizons collapse onto equal step counts; spread them")

    k = params.k
    e0 = modified_energy(u0, params.sigma0, k, params.mu)
    delta = time_step_delta(e0, params)

    raw = []
    measured = []
    sups = []
    margins = []
    current = u0
    prev_steps = 0
    for n_steps in steps:
        t_seg = (n_steps - prev_steps) * cfg.dt
        seg_cfg = SolverConfig(
            k=k,
            mu=params.mu,
            dt=cfg.dt,
            t_final=t_seg,
            grid=cfg.grid,
            monitor_stride=cfg.monitor_stride,
            noise_floor=cfg.noise_floor,
            skew_symmetric=cfg.skew_symmetric,
        )
        T_here = n_steps * cfg.dt
        sig_here = schedule_radius(e0, T_here, params)
        res = simulate(current, seg_cfg, GevreyParams(sig_here), keep_states=True)
        current = res.final.field
        prev_steps = n_steps
        raw.append(sig_here)
        measured.append(estimate_radius(current, gevrey))
        e_vals = [modified_energy(s, sig_here, k, params.mu) for s in res.states]
        sup = max(e_vals)
        sups.append(sup)
        e_start = modified_energy(u0, sig_here, k, params.mu)
        dev = max(sup - e_start, 1e-15 * max(1.0, abs(e_start)))
        margins.append((2.0 * e0 - e_start) / dev)

    kappa = ENVELOPE_SAFETY * measured[0] / raw[0]
    if not math.isfinite(kappa):
        kappa = 1.0  # entire data: any envelope is dominated
    rows = [
        ScheduleRow(
            T=n * cfg.dt,
            sigma_theoretical=min(params.sigma0, kappa * r),
            sigma_measured=m,
            delta=delta,
            n_steps=n,
            e_sigma_sup=sup,
            bound_margin=marg,
        )
        for n, r, m, sup, marg in zip(steps, raw, measured, sups, margins)
    ]
    return RadiusSchedule(rows=rows, sigma0=params.sigma0, calibration=kappa)


def calibrate_c0(
    samples: list[SpectralField],
    params: ContinuationParams,
    cfg,
    factor: float = 2.0,
    tol: float = 0.05,
) -> float:
    """Largest c0 <= DEFAULT_C0 for which every sample's Gevrey norm stays
    within `factor` of its initial value up to the lifespan T0(c0).

    Bisection in c0; for defocusing analytic data at moderate amplitude the
    growth criterion rarely binds, so the cap is usually returned.
    """
    from .solver import SolverConfig, simulate

    gev = GevreyParams(params.sigma0, params.s)

    def criterion(c0: float) -> bool:
        trial = ContinuationParams(
            sigma0=params.sigma0,
            k=params.k,
            c0=c0,
            c_ac=params.c_ac,
            alpha=params.alpha,
            mu=params.mu,
            s=params.s,
            a=params.a,
        )
        for u0 in samples:
            norm0 = gevrey_norm(u0, gev)
            t0 = local_timespan(norm0, trial)
            n_steps = max(1, int(round(t0 / cfg.dt)))
            run_cfg = SolverConfig(
                k=params.k,
                mu=params.mu,
                dt=t0 / n_steps if t0 / n_steps <= cfg.dt else cfg.dt,
                t_final=(t0 / n_steps if t0 / n_steps <= cfg.dt else cfg.dt) * n_steps,
                grid=cfg.grid,
                monitor_stride=max(1, n_steps // 8),
            )
            res = simulate(u0, run_cfg, GevreyParams(0.0), keep_states=True)
            worst = max(gevrey_norm(s, gev) for s in res.states)
            if worst > factor * norm0:
                return False
        return True

    if criterion(DEFAULT_C0):
        return DEFAULT_C0
    lo, hi = 0.0, DEFAULT_C0
    while hi - lo > tol * DEFAULT_C0:
        mid = 0.5 * (lo + hi)
        if criterion(mid):
            lo = mid
        else:
            hi = mid
    if lo == 0.0:
        raise ConfigurationError("no admissible c0 found; data too energetic")
    return lo


def fit_almost_conservation_constant(u0, cfg, sigmas, alpha: float, safety: float = 4.0) -> float:
    """C_ac = safety * (sweep-fitted constant): the induction wants an upper
    bound, not a sharp value."""
    sweep = almost_conservation_sweep(u0, cfg, GevreyParams(0.0), sigmas)
    return safety * sweep.fitted_constant(alpha, cfg.k)
