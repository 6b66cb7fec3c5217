"""Discrete space-time norms and empirical ratio probes for the core inequalities.

Fields live on an (x, t) box, compactly supported in a centered time window
(the discrete stand-in for sharp time cut-offs), and are measured through the
norm  || exp(sigma|xi|) (1+|xi|)^s (1+|tau - xi^3|)^b  u~(xi, tau) ||_L2,
which weights the distance of each space-time mode from the dispersive
characteristic tau = xi^3.

The probes do not prove anything: they compute left/right ratios of the
inequalities on seeded wave-packet ensembles (half placed on the
characteristic, where the hard cases live) and check that the observed
constants are finite and stable under grid refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field, replace

import numpy as np

from .energy import commutator_remainder
from .errors import (
    AnalyticityExceededError,
    ConfigurationError,
    ProbeInvalidError,
)
from .gevrey import exp_multiplier
from .grid import GridSpec, SpectralField

__all__ = [
    "SpaceTimeField",
    "EnsembleSpec",
    "ProbeParams",
    "ProbeResult",
    "FBoundResult",
    "xsb_norm",
    "time_window",
    "multilinear_ratio_probe",
    "strichartz_probe",
    "product_holder_probe",
    "f_bound_probe",
]


@dataclass(frozen=True)
class SpaceTimeField:
    """Real space-time field as 2-D Fourier coefficients, axes (tau, xi)."""

    grid: GridSpec
    n_time: int
    t_extent: float
    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=np.complex128)
        if arr.shape != (self.n_time, self.grid.n_modes):
            raise ConfigurationError(
                f"coefficients have shape {arr.shape}, expected "
                f"({self.n_time}, {self.grid.n_modes})"
            )
        if arr is self.coeffs:
            arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    @property
    def dt(self) -> float:
        return self.t_extent / self.n_time

    @property
    def taus(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n_time, d=self.dt)

    @property
    def tau_spacing(self) -> float:
        return 2.0 * np.pi / self.t_extent

    def l2_norm(self) -> float:
        weight = self.grid.mode_spacing * self.tau_spacing
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2) * weight))


def spacetime_transform(samples: np.ndarray, grid: GridSpec, t_extent: float) -> SpaceTimeField:
    """Real samples u[t_m, x_j] -> normalized 2-D coefficients."""
    samples = np.asarray(samples, dtype=np.float64)
    n_time = samples.shape[0]
    if samples.shape != (n_time, grid.n_modes):
        raise ConfigurationError(f"bad sample shape {samples.shape}")
    dt = t_extent / n_time
    coeffs = np.fft.fft2(samples) * (grid.dx * dt / (2.0 * np.pi))
    coeffs *= grid._origin_phase[None, :]
    return SpaceTimeField(grid, n_time, t_extent, coeffs)


def spacetime_samples(f: SpaceTimeField) -> np.ndarray:
    c = f.coeffs * f.grid._origin_phase[None, :]
    u = np.fft.ifft2(c) * (2.0 * np.pi / (f.grid.dx * f.dt))
    return u.real


def time_window(n_time: int, t_extent: float, fraction: float = 0.5) -> np.ndarray:
    """Smooth bump supported on the central `fraction` of the time box."""
    if not (0.0 < fraction <= 1.0):
        raise ConfigurationError(f"window fraction must lie in (0, 1], got {fraction}")
    t = (np.arange(n_time) + 0.5) * (t_extent / n_time)
    lo = 0.5 * t_extent * (1.0 - fraction)
    hi = 0.5 * t_extent * (1.0 + fraction)
    w = np.zeros(n_time)
    inside = (t > lo) & (t < hi)
    w[inside] = np.cos(np.pi * (t[inside] - 0.5 * t_extent) / (hi - lo)) ** 2
    return w


def xsb_norm(f: SpaceTimeField, sigma: float, s: float, b: float) -> float:
    """|| exp(sigma|xi|) (1+|xi|)^s (1+|tau-xi^3|)^b u~ ||_{L2(tau,xi)}."""
    if sigma < 0:
        raise ConfigurationError(f"sigma must be >= 0, got {sigma}")
    xi = f.grid.wavenumbers
    mag = np.abs(f.coeffs)
    if sigma > 0:
        colmax = mag.max(axis=0)
        nz = colmax > 0
        if nz.any():
            worst = float(np.max(sigma * np.abs(xi[nz]) + np.log(colmax[nz])))
            if worst > 700.0:
                raise AnalyticityExceededError(
                    f"exp({sigma:g}*|xi|) overflows on space-time modes"
                )
    mod = 1.0 + np.abs(f.taus[:, None] - xi[None, :] ** 3)
    weight = np.exp(sigma * np.abs(xi))[None, :] * (1.0 + np.abs(xi))[None, :] ** s * mod**b
    total = np.sum((weight * mag) ** 2) * f.grid.mode_spacing * f.tau_spacing
    return float(np.sqrt(total))


def lp_space_time_norm(samples: np.ndarray, grid: GridSpec, t_extent: float, p: float) -> float:
    """Physical-space quadrature of the joint L^p norm over the box."""
    dt = t_extent / samples.shape[0]
    return float((np.sum(np.abs(samples) ** p) * grid.dx * dt) ** (1.0 / p))


@dataclass(frozen=True)
class ProbeParams:
    s: float = 0.1
    b: float = 0.55
    eps: float = 0.05
    sigma: float = 0.0
    ensemble_size: int = 20
    seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.eps <= 0.1):
            raise ConfigurationError(f"eps must lie in (0, 0.1], got {self.eps}")
        if self.ensemble_size < 20:
            raise ConfigurationError(
                f"ensemble_size must be >= 20, got {self.ensemble_size}"
            )
        if self.sigma < 0:
            raise ConfigurationError(f"sigma must be >= 0, got {self.sigma}")


@dataclass(frozen=True)
class EnsembleSpec:
    """Discretization box for probe ensembles."""

    half_length: float = 4.0 * np.pi
    n_modes: int = 128
    n_time: int = 128
    t_extent: float = 8.0

    @property
    def grid(self) -> GridSpec:
        return GridSpec(self.half_length, self.n_modes)

    def refined(self, factor: int = 2) -> "EnsembleSpec":
        """Same physical box, doubled resolution in x and t."""
        return replace(self, n_modes=factor * self.n_modes, n_time=factor * self.n_time)


@dataclass
class ProbeResult:
    probe: str
    ratios: np.ndarray
    n_modes: int
    n_time: int

    @property
    def max_ratio(self) -> float:
        return float(np.max(self.ratios))

    @property
    def mean_ratio(self) -> float:
        return float(np.mean(self.ratios))


def _member_rng(seed: int, tag: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, tag, index]))


def _wave_packet(spec: EnsembleSpec, rng, on_characteristic: bool) -> np.ndarray:
    """Modulated Gaussian packet, band-limited by construction.

    Center frequencies are confined so that products of up to eight packets
    stay inside the retained (xi, tau) band of the baseline box.
    """
    grid = spec.grid
    x = grid.points
    t = (np.arange(spec.n_time) + 0.5) * (spec.t_extent / spec.n_time)
    xi_c = rng.uniform(0.3, 1.5)
    tau_c = xi_c**3 if on_characteristic else rng.uniform(-4.0, 4.0)
    x_c = rng.uniform(-0.25, 0.25) * grid.half_length
    t_c = spec.t_extent * rng.uniform(0.4, 0.6)
    w_x = rng.uniform(1.5, 3.0)
    w_t = rng.uniform(1.2, 2.0)
    phase = rng.uniform(0.0, 2.0 * np.pi)
    amp = rng.uniform(0.5, 1.5)
    carrier = np.cos(xi_c * x[None, :] + tau_c * t[:, None] + phase)
    envelope = np.exp(-((x[None, :] - x_c) ** 2) / (2 * w_x**2)) * np.exp(
        -((t[:, None] - t_c) ** 2) / (2 * w_t**2)
    )
    return amp * carrier * envelope * time_window(spec.n_time, spec.t_extent)[:, None]


def _free_evolution_packet(spec: EnsembleSpec, rng) -> np.ndarray:
    """Exact dispersive evolution of a spatial packet, time-windowed.

    Its space-time transform concentrates on tau = xi^3, the near-extremizing
    population for the L8 estimate.
    """
    grid = spec.grid
    x = grid.points
    xi_c = rng.uniform(0.4, 1.2)
    x_c = rng.uniform(-0.25, 0.25) * grid.half_length
    w_x = rng.uniform(2.5, 4.0)
    amp = rng.uniform(0.5, 1.5)
    u0 = amp * np.cos(xi_c * (x - x_c)) * np.exp(-((x - x_c) ** 2) / (2 * w_x**2))
    t = (np.arange(spec.n_time) + 0.5) * (spec.t_extent / spec.n_time)
    t_mid = 0.5 * spec.t_extent
    xi3 = grid.derivative_wavenumbers**3
    base = np.fft.fft(u0)  # diagonal flow: origin phases cancel in the round trip
    out = np.empty((spec.n_time, grid.n_modes))
    for m, tm in enumerate(t):
        out[m] = np.fft.ifft(base * np.exp(1j * (tm - t_mid) * xi3)).real
    return out * time_window(spec.n_time, spec.t_extent)[:, None]


def multilinear_ratio_probe(spec: EnsembleSpec, params: ProbeParams, k: int) -> ProbeResult:
    """Ratio probe for the derivative product estimate:

        || d/dx (u_1 ... u_{k+1}) ||_{X^(sigma, s, -1/2+2eps)}
            <= C prod_i || u_i ||_{X^(sigma, s, b_rhs)},

    with b_rhs = 1/2 + eps at sigma = 0 and 1/2 + 2*eps for sigma > 0.
    """
    if params.s <= (k - 4) / (2 * k):
        raise ConfigurationError(
            f"s must exceed (k-4)/(2k) = {(k - 4) / (2 * k):g}, got {params.s}"
        )
    grid = spec.grid
    b_lhs = -0.5 + 2 * params.eps
    b_rhs = 0.5 + (2 * params.eps if params.sigma > 0 else params.eps)
    ratios = np.empty(params.ensemble_size)
    for i in range(params.ensemble_size):
        rng = _member_rng(params.seed, 1, i)
        on_char = i % 2 == 0
        packets = [_wave_packet(spec, rng, on_char) for _ in range(k + 1)]
        product = packets[0].copy()
        for p in packets[1:]:
            product *= p
        lhs_field = spacetime_transform(product, grid, spec.t_extent)
        dcoeffs = lhs_field.coeffs * (1j * grid.derivative_wavenumbers)[None, :]
        lhs = xsb_norm(
            SpaceTimeField(grid, spec.n_time, spec.t_extent, dcoeffs),
            params.sigma,
            params.s,
            b_lhs,
        )
        rhs = 1.0
        for p in packets:
            rhs *= xsb_norm(
                spacetime_transform(p, grid, spec.t_extent), params.sigma, params.s, b_rhs
            )
        ratios[i] = lhs / rhs if rhs > 0 else 0.0
    if np.all(ratios == 0):
        raise ProbeInvalidError("multilinear ensemble degenerated: all ratios vanish")
    return ProbeResult("multilinear", ratios, spec.n_modes, spec.n_time)


def strichartz_probe(spec: EnsembleSpec, params: ProbeParams, b: float | None = None) -> ProbeResult:
    """Ratio probe for ||u||_{L8 L8} <= C ||u||_{X^(0, b)}, b > 1/2."""
    b = params.b if b is None else b
    if b <= 0.5:
        raise ConfigurationError(f"b must exceed 1/2, got {b}")
    grid = spec.grid
    ratios = []
    for i in range(params.ensemble_size):
        rng = _member_rng(params.seed, 2, i)
        if i % 2 == 0:
            u = _free_evolution_packet(spec, rng)
        else:
            u = _wave_packet(spec, rng, on_characteristic=False)
        rhs = xsb_norm(spacetime_transform(u, grid, spec.t_extent), 0.0, 0.0, b)
        if rhs == 0:
            continue  # zero member: 0/0 excluded
        lhs = lp_space_time_norm(u, grid, spec.t_extent, 8.0)
        ratios.append(lhs / rhs)
    if not ratios or np.all(np.asarray(ratios) == 0):
        raise ProbeInvalidError("Strichartz ensemble degenerated")
    return ProbeResult("strichartz", np.asarray(ratios), spec.n_modes, spec.n_time)


def product_holder_probe(spec: EnsembleSpec, params: ProbeParams, k: int, b: float | None = None) -> ProbeResult:
    """Ratio probe for the product bound

        || u_1 ... u_{k+1} ||_{L2 L2}
            <= C prod_1^{k-3} ||u_i||_{X^(1/2+eps, b)} prod_{k-2}^{k+1} ||u_i||_{X^(0, b)}.
    """
    if k < 4:
        raise ConfigurationError(f"k must be >= 4, got {k}")
    b = params.b if b is None else b
    if b <= 0.5:
        raise ConfigurationError(f"b must exceed 1/2, got {b}")
    grid = spec.grid
    s_rough = 0.5 + params.eps
    ratios = np.empty(params.ensemble_size)
    for i in range(params.ensemble_size):
        rng = _member_rng(params.seed, 3, i)
        on_char = i % 2 == 0
        packets = [_wave_packet(spec, rng, on_char) for _ in range(k + 1)]
        product = packets[0].copy()
        for p in packets[1:]:
            product *= p
        lhs = lp_space_time_norm(product, grid, spec.t_extent, 2.0)
        rhs = 1.0
        for j, p in enumerate(packets):
            s_j = s_rough if j < k - 3 else 0.0
            rhs *= xsb_norm(spacetime_transform(p, grid, spec.t_extent), 0.0, s_j, b)
        ratios[i] = lhs / rhs if rhs > 0 else 0.0
    if np.all(ratios == 0):
        raise ProbeInvalidError("product ensemble degenerated: all ratios vanish")
    return ProbeResult("product_holder", ratios, spec.n_modes, spec.n_time)


@dataclass
class FBoundResult:
    sup_ratio: float        # || F(U) ||_{L2 L2} form
    sup_deriv_ratio: float  # || d/dx F(U) ||_{X^(0, b-1)} form, b-1 = -1/2 + 2 eps
    rows: list[tuple[float, float, float]]  # (sigma, ratio, deriv_ratio)


def f_bound_probe(
    u0: SpectralField,
    spec: EnsembleSpec,
    sigmas,
    alpha: float,
    k: int,
    b: float = 0.55,
    eps: float = 0.05,
    dt_substeps: int = 64,
) -> FBoundResult:
    """Probe the two commutator-remainder bounds

        || F(U) ||_{L2 L2}              <= C sigma^alpha ||U||_{X^(0, 1, b)}^{k+1},
        || d/dx F(U) ||_{X^(0, b'-1)}   <= C sigma^alpha ||U||_{X^(0, 1, b)}^{k+1},

    with the negative modulation exponent b'-1 = -1/2 + 2*eps.  Snapshots of
    an actual defocusing simulation fill the central time window of the box;
    for each sigma the measured-to-allowed ratios are returned plus their sups.

    sigma = 0 contributes zero ratios by definition (F vanishes identically).
    """
    alpha_max = (k + 4) / (2 * k)
    if not (0.0 <= alpha < alpha_max):
        raise ConfigurationError(f"alpha must lie in [0, {alpha_max:g}), got {alpha}")
    from .gevrey import GevreyParams
    from .grid import inverse_transform
    from .solver import SolverConfig, simulate

    grid = u0.grid
    if grid != spec.grid:
        raise ConfigurationError("initial data grid must match the ensemble box")
    slice_dt = spec.t_extent / spec.n_time
    window = time_window(spec.n_time, spec.t_extent)
    lo = int(np.ceil(0.25 * spec.n_time))
    hi = int(np.floor(0.75 * spec.n_time))
    n_slices = hi - lo
    cfg = SolverConfig(
        k=k,
        mu=-1,
        dt=slice_dt / dt_substeps,
        t_final=(n_slices - 1) * slice_dt,
        grid=grid,
        monitor_stride=dt_substeps,
    )
    run = simulate(u0, cfg, GevreyParams(0.0), keep_states=True)
    states = run.states
    dxdt = grid.dx * slice_dt

    b_neg = -0.5 + 2.0 * eps
    rows = []
    sup_ratio = 0.0
    sup_deriv = 0.0
    for sigma in sorted(float(s) for s in sigmas):
        if sigma < 0:
            raise ConfigurationError("sigmas must be >= 0")
        if sigma == 0.0:
            rows.append((0.0, 0.0, 0.0))
            continue
        u_slices = np.zeros((spec.n_time, grid.n_modes))
        f_slices = np.zeros((spec.n_time, grid.n_modes))
        for j, state in enumerate(states):
            m = lo + j
            weighted = exp_multiplier(state, sigma)
            rem = commutator_remainder(state, sigma, k, -1)
            u_slices[m] = inverse_transform(weighted) * window[m]
            f_slices[m] = inverse_transform(rem, symmetry_tol=1e-6) * window[m]
        u_field = spacetime_transform(u_slices, grid, spec.t_extent)
        rhs = sigma**alpha * xsb_norm(u_field, 0.0, 1.0, b) ** (k + 1)
        lhs = float(np.sqrt(np.sum(f_slices**2) * dxdt))
        f_field = spacetime_transform(f_slices, grid, spec.t_extent)
        df = f_field.coeffs * (1j * grid.derivative_wavenumbers)[None, :]
        lhs_deriv = xsb_norm(
            SpaceTimeField(grid, spec.n_time, spec.t_extent, df), 0.0, 0.0, b_neg
        )
        ratio = lhs / rhs if rhs > 0 else 0.0
        deriv_ratio = lhs_deriv / rhs if rhs > 0 else 0.0
        rows.append((sigma, ratio, deriv_ratio))
        sup_ratio = max(sup_ratio, ratio)
        sup_deriv = max(sup_deriv, deriv_ratio)
    return FBoundResult(sup_ratio, sup_deriv, rows)
