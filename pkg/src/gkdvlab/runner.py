"""Experiment execution: builds inputs, runs the requested study, writes artifacts.

Artifacts per run:
  metadata.json   resolved config, library versions, seed, schema versions,
                  partial/error flags
  <kind>.csv      the experiment table(s); every CSV starts with a
                  `#schema=gkdvlab.<table>.v<n>` line followed by the header

All output is deterministic for a fixed config+seed: floats are written with
repr (shortest round-trip), tables are ordered, times and paths never enter
the payload.

Exit codes: 0 ok, 2 validation, 3 blow-up, 4 analyticity-exceeded, 5 resource.
"""

from __future__ import annotations

import csv
import json
import math
import platform
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .config import ExperimentConfig
from .continuation import (
    ContinuationParams,
    envelope_vs_measured,
    fit_almost_conservation_constant,
    iterate_energy_induction,
    local_timespan,
    time_step_delta,
)
from .energy import almost_conservation_sweep, energy_reports, modified_energy
from .errors import (
    AnalyticityExceededError,
    BlowUpError,
    ConfigValidationError,
    ConfigurationError,
    GkdvError,
    InsufficientResolutionError,
    ResourceLimitError,
)
from .gevrey import GevreyParams, estimate_radius, gevrey_norm
from .grid import GridSpec, SpectralField
from .initial_data import gaussian_field, random_analytic_field, sech_field
from .probes import (
    EnsembleSpec,
    ProbeParams,
    f_bound_probe,
    multilinear_ratio_probe,
    product_holder_probe,
    strichartz_probe,
)
from .solver import SolverConfig, simulate, soliton_exact
from .util import least_squares_slope

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BLOWUP = 3
EXIT_ANALYTICITY = 4
EXIT_RESOURCE = 5

SCHEMA_VERSIONS = {
    "trace": "gkdvlab.trace.v1",
    "energy": "gkdvlab.energy.v1",
    "radius": "gkdvlab.radius.v1",
    "probes": "gkdvlab.probes.v1",
    "sweep": "gkdvlab.sweep.v1",
    "schedule": "gkdvlab.schedule.v1",
    "induction": "gkdvlab.induction.v1",
    "esigma": "gkdvlab.esigma.v1",
}


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_table(path: Path, schema: str, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"#schema={SCHEMA_VERSIONS[schema]}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])


def write_json_table(path: Path, schema: str, header: list[str], rows) -> None:
    payload = {
        "schema": SCHEMA_VERSIONS[schema],
        "columns": header,
        "rows": [[x if not isinstance(x, float) else x for x in row] for row in rows],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def build_initial_data(config: ExperimentConfig) -> SpectralField:
    init = config.initial
    grid = config.grid
    if init.kind == "soliton":
        return soliton_exact(config.solver_k, init.c, init.x0, 0.0, grid)
    if init.kind == "sech":
        return sech_field(grid, amplitude=init.amplitude, width=init.width, x0=init.x0)
    if init.kind == "gaussian":
        return gaussian_field(grid, amplitude=init.amplitude, width=init.width, x0=init.x0)
    return random_analytic_field(grid, seed=config.seed, amplitude=init.amplitude, decay=init.decay)


def _solver_config(config: ExperimentConfig, t_final: float | None = None) -> SolverConfig:
    return SolverConfig(
        k=config.solver_k,
        mu=config.solver_mu,
        dt=config.dt,
        t_final=config.t_final if t_final is None else t_final,
        grid=config.grid,
        monitor_stride=config.monitor_stride,
        noise_floor=config.noise_floor,
        skew_symmetric=config.skew_symmetric,
    )


def _emit(config, out_dir, name, schema, header, rows):
    if config.output_format == "json":
        write_json_table(out_dir / f"{name}.json", schema, header, rows)
    else:
        write_table(out_dir / f"{name}.csv", schema, header, rows)


TRACE_HEADER = ["t", "mass", "energy", "e_sigma", "radius_est", "linf", "identity_residual"]


def _trace_rows(result, config):
    sigma = config.gevrey.sigma
    reports = energy_reports(
        result.states, result.times, sigma, config.solver_k, config.solver_mu
    )
    rows = []
    for rec, rep in zip(result.records, reports):
        rows.append(
            [rec.t, rec.mass, rec.energy, rec.e_sigma, rec.radius_estimate, rec.linf,
             rep.identity_residual]
        )
    return rows


def _run_simulate(config: ExperimentConfig, out_dir: Path, workers: int) -> dict:
    u0 = build_initial_data(config)
    result = simulate(u0, _solver_config(config), config.gevrey, keep_states=True)
    _emit(config, out_dir, "trace", "trace", TRACE_HEADER, _trace_rows(result, config))
    return {"records": len(result.records)}


def _run_energy(config: ExperimentConfig, out_dir: Path, workers: int) -> dict:
    u0 = build_initial_data(config)
    result = simulate(u0, _solver_config(config), config.gevrey, keep_states=True)
    reports = energy_reports(
        result.states, result.times, config.gevrey.sigma, config.solver_k, config.solver_mu
    )
    rows = [
        [r.t, r.mass, r.energy, r.e_sigma, r.r_sigma, r.identity_residual] for r in reports
    ]
    _emit(config, out_dir, "energy", "energy",
          ["t", "mass", "energy", "e_sigma", "r_sigma", "identity_residual"], rows)
    return {"records": len(rows)}


def _run_radius(config: ExperimentConfig, out_dir: Path, workers: int) -> dict:
    u0 = build_initial_data(config)
    estimate = estimate_radius(u0, config.gevrey)
    rows = [[config.initial.kind, config.initial.width, config.initial.decay, estimate]]
    _emit(config, out_dir, "radius", "radius", ["profile", "width", "decay", "radius_estimate"], rows)
    return {"radius_estimate": estimate}


def _sweep_sigmas(config: ExperimentConfig, u0: SpectralField) -> np.ndarray:
    spec = config.sweep
    if spec.sigmas:
        return np.asarray(sorted(spec.sigmas))
    radius = estimate_radius(u0, config.gevrey)
    if not math.isfinite(radius):
        radius = config.initial.decay
    top = spec.max_fraction * radius
    return np.geomspace(top * 10.0**-spec.decades, top, spec.n_sigmas)


def _run_sweep(config: ExperimentConfig, out_dir: Path, workers: int) -> dict:
    u0 = build_initial_data(config)
    sigmas = _sweep_sigmas(config, u0)
    result = simulate(u0, _solver_config(config), config.gevrey, keep_states=True)

    def evaluate(sig: float):
        return [modified_energy(s, sig, config.solver_k, config.solver_mu) for s in result.states]

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        all_values = list(pool.map(evaluate, sigmas))

    for i, (sig, values) in enumerate(zip(sigmas, all_values)):
        sub = out_dir / f"sigma_{i:02d}"
        sub.mkdir(exist_ok=True)
        _emit(config, sub, "esigma", "esigma", ["t", "e_sigma"],
              [[t, v] for t, v in zip(result.times, values)])

    deviations = np.array([max(abs(v - vals[0]) for v in vals) for vals in all_values])
    slope, intercept = least_squares_slope(np.log(sigmas), np.log(deviations))
    rows = [
        [float(sig), float(dev), vals[0], slope, intercept]
        for sig, dev, vals in zip(sigmas, deviations, all_values)
    ]
    _emit(config, out_dir, "sweep", "sweep",
          ["sigma", "deviation", "e_sigma0", "slope", "intercept"], rows)
    return {"slope": slope, "n_sigmas": len(sigmas)}


def _run_probe(config: ExperimentConfig, out_dir: Path, workers: int) -> dict:
    p = config.probe
    spec = EnsembleSpec(p.half_length_pi * math.pi, p.n_modes, p.n_time, p.t_extent)
    params = ProbeParams(
        s=p.s, b=p.b, eps=p.eps, sigma=p.sigma, ensemble_size=p.ensemble_size, seed=config.seed
    )
    k = config.solver_k
    rows = []

    def record(result, growth):
        rows.append(
            [result.probe, k, p.s, p.b, p.eps, p.sigma, result.n_modes, result.n_time,
             result.max_ratio, result.mean_ratio, growth]
        )

    base_ml = multilinear_ratio_probe(spec, params, k)
    base_st = strichartz_probe(spec, params)
    base_ho = product_holder_probe(spec, params, k)
    if p.refine_check:
        refined = spec.refined()
        record(base_ml, multilinear_ratio_probe(refined, params, k).max_ratio / base_ml.max_ratio)
        record(base_st, strichartz_probe(refined, params).max_ratio / base_st.max_ratio)
        record(base_ho, product_holder_probe(refined, params, k).max_ratio / base_ho.max_ratio)
    else:
        record(base_ml, math.nan)
        record(base_st, math.nan)
        record(base_ho, math.nan)

    u0 = random_analytic_field(
        spec.grid, seed=config.seed, amplitude=config.initial.amplitude, decay=config.initial.decay
    )
    fb = f_bound_probe(u0, spec, p.f_sigmas, alpha=p.alpha, k=k, eps=p.eps)
    nonzero = [r for _, r, _ in fb.rows if r > 0]
    nonzero_d = [d for _, _, d in fb.rows if d > 0]
    mean_f = float(np.mean(nonzero)) if nonzero else 0.0
    mean_d = float(np.mean(nonzero_d)) if nonzero_d else 0.0
    rows.append(["f_bound", k, 1.0, p.b, p.eps, max(p.f_sigmas), spec.n_modes, spec.n_time,
                 fb.sup_ratio, mean_f, math.nan])
    rows.append(["f_bound_deriv", k, 0.0, -0.5 + 2 * p.eps, p.eps, max(p.f_sigmas),
                 spec.n_modes, spec.n_time, fb.sup_deriv_ratio, mean_d, math.nan])
    _emit(config, out_dir, "probes", "probes",
          ["probe", "k", "s", "b", "eps", "sigma", "n_modes", "n_time",
           "max_ratio", "mean_ratio", "growth_factor"], rows)
    return {"probes": len(rows)}


def _run_continuation(config: ExperimentConfig, out_dir: Path, workers: int) -> dict:
    spec = config.continuation
    u0 = build_initial_data(config)
    base_cfg = _solver_config(config)

    c_ac = spec.c_ac
    if c_ac <= 0.0:  # fit from a sweep on this data, as documented
        radius = estimate_radius(u0, config.gevrey)
        if not math.isfinite(radius):
            radius = config.initial.decay
        top = 0.5 * min(radius, 2.0 * spec.sigma0)
        sigmas = np.geomspace(top * 10.0**-2.5, top, 8)
        c_ac = fit_almost_conservation_constant(u0, base_cfg, sigmas, alpha=spec.alpha)

    params = ContinuationParams(
        sigma0=spec.sigma0, k=config.solver_k, c0=spec.c0, c_ac=c_ac,
        alpha=spec.alpha, mu=config.solver_mu, s=spec.s, a=spec.a,
    )
    norm0 = gevrey_norm(u0, GevreyParams(spec.sigma0, spec.s,
                                         config.gevrey.amp_guard, config.gevrey.fit_floor))
    t0 = local_timespan(norm0, params)
    horizons = [m * t0 for m in spec.t0_multiples]
    schedule = envelope_vs_measured(u0, horizons, params, base_cfg, config.gevrey)

    xs = [math.log(r.T) for r in schedule.rows]
    ys = [math.log(r.sigma_theoretical) for r in schedule.rows]
    slope, _ = least_squares_slope(xs, ys)
    rows = [
        [r.T, r.sigma_theoretical, r.sigma_measured, r.delta, r.n_steps,
         r.e_sigma_sup, r.bound_margin, params.alpha, params.k, slope]
        for r in schedule.rows
    ]
    _emit(config, out_dir, "schedule", "schedule",
          ["T", "sigma_theoretical", "sigma_measured", "delta", "n_steps",
           "e_sigma_sup", "bound_margin", "alpha", "k", "envelope_slope"], rows)

    e0 = modified_energy(u0, spec.sigma0, config.solver_k, config.solver_mu)
    delta = time_step_delta(e0, params)
    induction = iterate_energy_induction(u0, spec.induction_steps * delta, params, base_cfg)
    ind_rows = [
        [row.j, row.t, row.e_sigma_sup, row.bound_growth, row.bound_doubling,
         row.margin_growth, row.margin_doubling, int(row.ok)]
        for row in induction.rows
    ]
    _emit(config, out_dir, "induction", "induction",
          ["j", "t", "e_sigma_sup", "bound_growth", "bound_doubling",
           "margin_growth", "margin_doubling", "ok"], ind_rows)
    return {
        "c_ac": c_ac,
        "t0": t0,
        "envelope_consistent": schedule.consistent,
        "induction_findings": induction.findings,
        "envelope_slope": slope,
    }


_RUNNERS = {
    "simulate": _run_simulate,
    "energy": _run_energy,
    "radius": _run_radius,
    "probe": _run_probe,
    "sweep": _run_sweep,
    "continuation": _run_continuation,
}


def run(config: ExperimentConfig, out_dir: str | Path, workers: int = 1) -> int:
    """Execute the configured experiment; returns the process exit code."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    meta = {
        "schema_versions": SCHEMA_VERSIONS,
        "package_version": __version__,
        "numpy_version": np.__version__,
        "python_version": platform.python_version(),
        "seed": config.seed,
        "config": config.resolved(),
        "partial": False,
        "error": None,
        "summary": {},
    }
    code = EXIT_OK
    try:
        meta["summary"] = _RUNNERS[config.kind](config, out, workers)
    except BlowUpError as err:
        meta["partial"] = True
        meta["error"] = f"blow-up: {err}"
        code = EXIT_BLOWUP
    except AnalyticityExceededError as err:
        meta["partial"] = True
        meta["error"] = f"analyticity-exceeded: {err}"
        code = EXIT_ANALYTICITY
    except ResourceLimitError as err:
        meta["partial"] = True
        meta["error"] = f"resource: {err}"
        code = EXIT_RESOURCE
    except (ConfigurationError, InsufficientResolutionError) as err:
        meta["partial"] = True
        meta["error"] = f"configuration: {err}"
        code = EXIT_VALIDATION
    with open(out / "metadata.json", "w") as fh:
        json.dump(meta, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return code
