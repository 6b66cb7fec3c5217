"""Experiment configuration: TOML parsing with fail-closed validation.

Every problem in the text is reported (not first-error-only) with its key
path; unknown keys and sections are rejected.  Nothing is computed until the
whole config validates.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .errors import ConfigValidationError
from .gevrey import GevreyParams
from .grid import GridSpec

__all__ = ["ExperimentConfig", "parse_config", "ENV_PREFIX"]

KINDS = ("simulate", "radius", "energy", "probe", "continuation", "sweep")
INITIAL_KINDS = ("soliton", "sech", "gaussian", "random_analytic")

ENV_PREFIX = "GKDVLAB_"


@dataclass
class InitialDataSpec:
    kind: str
    amplitude: float = 0.1
    decay: float = 2.0
    width: float = 1.0
    x0: float = 0.0
    c: float = 1.0


@dataclass
class SweepSpec:
    sigmas: list[float] = field(default_factory=list)  # explicit, or derived:
    n_sigmas: int = 8
    decades: float = 2.5
    max_fraction: float = 0.5  # of the measured initial radius


@dataclass
class ContinuationSpec:
    sigma0: float
    alpha: float
    c0: float = 1.0
    c_ac: float = 0.0  # 0 means: fit from a sweep on the initial data
    a: float = 20.0
    s: float = 1.0
    t0_multiples: list[float] = field(default_factory=lambda: [1.0, 2.0, 4.0, 8.0])
    induction_steps: int = 3


@dataclass
class ProbeSpec:
    s: float = 0.1
    b: float = 0.55
    eps: float = 0.05
    sigma: float = 0.0
    ensemble_size: int = 20
    half_length_pi: float = 4.0
    n_modes: int = 128
    n_time: int = 128
    t_extent: float = 8.0
    alpha: float = 0.95
    f_sigmas: list[float] = field(default_factory=lambda: [0.0, 0.05, 0.1, 0.2, 0.4])
    refine_check: bool = True


@dataclass
class ExperimentConfig:
    kind: str
    seed: int
    grid: GridSpec
    solver_k: int
    solver_mu: int
    dt: float
    t_final: float
    monitor_stride: int
    noise_floor: float
    skew_symmetric: bool
    gevrey: GevreyParams
    initial: InitialDataSpec
    output_dir: str
    output_format: str
    sweep: SweepSpec | None = None
    continuation: ContinuationSpec | None = None
    probe: ProbeSpec | None = None

    def resolved(self) -> dict:
        """Plain-dict view of every resolved setting, for metadata.json."""
        out = {
            "experiment": {"kind": self.kind, "seed": self.seed},
            "grid": {
                "half_length_pi": self.grid.half_length / math.pi,
                "n_modes": self.grid.n_modes,
            },
            "solver": {
                "k": self.solver_k,
                "mu": self.solver_mu,
                "dt": self.dt,
                "t_final": self.t_final,
                "monitor_stride": self.monitor_stride,
                "noise_floor": self.noise_floor,
                "skew_symmetric": self.skew_symmetric,
            },
            "gevrey": {
                "sigma": self.gevrey.sigma,
                "s": self.gevrey.s,
                "amp_guard": self.gevrey.amp_guard,
                "fit_floor": self.gevrey.fit_floor,
            },
            "initial_data": {
                "kind": self.initial.kind,
                "amplitude": self.initial.amplitude,
                "decay": self.initial.decay,
                "width": self.initial.width,
                "x0": self.initial.x0,
                "c": self.initial.c,
            },
            "output": {"directory": self.output_dir, "format": self.output_format},
        }
        if self.sweep is not None:
            out["sweep"] = vars(self.sweep).copy()
        if self.continuation is not None:
            out["continuation"] = vars(self.continuation).copy()
        if self.probe is not None:
            out["probe"] = vars(self.probe).copy()
        return out


class _Validator:
    def __init__(self, data: dict):
        self.data = data
        self.problems: list[str] = []
        self.seen: dict[str, set] = {}

    def error(self, path: str, message: str):
        self.problems.append(f"{path}: {message}")

    def section(self, name: str) -> dict:
        self.seen.setdefault(name, set())
        sec = self.data.get(name, {})
        if not isinstance(sec, dict):
            self.error(name, "must be a table")
            return {}
        return sec

    def take(self, section: str, key: str, types, default=None, required=False, check=None, expect=""):
        sec = self.section(section)
        self.seen[section].add(key)
        path = f"{section}.{key}"
        if key not in sec:
            if required:
                self.error(path, f"required key missing ({expect})" if expect else "required key missing")
            return default
        value = sec[key]
        if isinstance(value, bool) and bool not in (types if isinstance(types, tuple) else (types,)):
            self.error(path, f"expected {expect or types}, got boolean")
            return default
        if not isinstance(value, types):
            self.error(path, f"expected {expect or types}, got {type(value).__name__}: {value!r}")
            return default
        if isinstance(value, int) and float in (types if isinstance(types, tuple) else (types,)):
            value = float(value)
        if check is not None and not check(value):
            self.error(path, f"out of range ({expect}): {value!r}")
            return default
        return value

    def reject_unknown(self):
        for name, sec in self.data.items():
            if name not in self.seen:
                self.error(name, "unknown section")
                continue
            if isinstance(sec, dict):
                for key in sec:
                    if key not in self.seen[name]:
                        self.error(f"{name}.{key}", "unknown key")


def _float_list(v):
    return isinstance(v, list) and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)


def apply_env_overrides(data: dict, environ=None) -> dict:
    """GKDVLAB_<SECTION>__<KEY>=value overrides the parsed config in place."""
    environ = os.environ if environ is None else environ
    for name, raw in environ.items():
        if not name.startswith(ENV_PREFIX) or "__" not in name:
            continue
        section, key = name[len(ENV_PREFIX) :].lower().split("__", 1)
        try:
            value = tomllib.loads(f"x = {raw}")["x"]
        except tomllib.TOMLDecodeError:
            value = raw
        data.setdefault(section, {})[key] = value
    return data


def parse_config(text: str, env_overrides: bool = False) -> ExperimentConfig:
    """Validate config text; raises ConfigValidationError listing every problem."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as err:
        raise ConfigValidationError([f"TOML syntax: {err}"]) from err
    if env_overrides:
        data = apply_env_overrides(data)

    v = _Validator(data)
    kind = v.take(
        "experiment", "kind", str, required=True,
        check=lambda s: s in KINDS, expect="one of " + "|".join(KINDS),
    )
    seed = v.take("experiment", "seed", int, default=0, check=lambda n: 0 <= n < 2**64, expect="u64")

    half_pi = v.take("grid", "half_length_pi", (int, float), required=True,
                     check=lambda x: x > 0, expect="positive real, units of pi")
    n_modes = v.take("grid", "n_modes", int, required=True,
                     check=lambda n: n >= 16 and (n & (n - 1)) == 0, expect="power of two >= 16")

    k = v.take("solver", "k", int, required=True, check=lambda n: n >= 2, expect="integer >= 2")
    mu = v.take("solver", "mu", int, required=True, check=lambda n: n in (-1, 1), expect="+1 or -1")
    dt = v.take("solver", "dt", (int, float), required=True,
                check=lambda x: 0 < x <= 0.1, expect="real in (0, 0.1]")
    t_final = v.take("solver", "t_final", (int, float), required=True,
                     check=lambda x: x >= 0, expect="real >= 0")
    stride = v.take("solver", "monitor_stride", int, default=10, check=lambda n: n >= 1, expect=">= 1")
    noise_floor = v.take("solver", "noise_floor", (int, float), default=1e-13,
                         check=lambda x: 0 < x < 1, expect="in (0, 1)")
    skew = v.take("solver", "skew_symmetric", bool, default=False, expect="boolean")

    sigma = v.take("gevrey", "sigma", (int, float), default=0.0, check=lambda x: x >= 0, expect=">= 0")
    s_idx = v.take("gevrey", "s", (int, float), default=0.0)
    amp_guard = v.take("gevrey", "amp_guard", (int, float), default=700.0,
                       check=lambda x: x > 0, expect="> 0")
    fit_floor = v.take("gevrey", "fit_floor", (int, float), default=1e-12,
                       check=lambda x: 0 < x < 1, expect="in (0, 1)")

    init_kind = v.take("initial_data", "kind", str, required=True,
                       check=lambda s: s in INITIAL_KINDS, expect="one of " + "|".join(INITIAL_KINDS))
    amplitude = v.take("initial_data", "amplitude", (int, float), default=0.1,
                       check=lambda x: x > 0, expect="> 0")
    decay = v.take("initial_data", "decay", (int, float), default=2.0,
                   check=lambda x: x > 0, expect="> 0")
    width = v.take("initial_data", "width", (int, float), default=1.0,
                   check=lambda x: x > 0, expect="> 0")
    x0 = v.take("initial_data", "x0", (int, float), default=0.0)
    c = v.take("initial_data", "c", (int, float), default=1.0, check=lambda x: x > 0, expect="> 0")

    out_dir = v.take("output", "directory", str, default="out")
    out_format = v.take("output", "format", str, default="csv",
                        check=lambda s: s in ("csv", "json"), expect="csv|json")

    sweep = None
    if kind == "sweep" or "sweep" in data:
        sigmas = v.take("sweep", "sigmas", list, default=[], check=_float_list, expect="list of reals")
        n_sigmas = v.take("sweep", "n_sigmas", int, default=8, check=lambda n: n >= 2, expect=">= 2")
        decades = v.take("sweep", "decades", (int, float), default=2.5,
                         check=lambda x: x > 0, expect="> 0")
        max_fraction = v.take("sweep", "max_fraction", (int, float), default=0.5,
                              check=lambda x: 0 < x < 1, expect="in (0, 1)")
        sweep = SweepSpec(list(map(float, sigmas or [])), n_sigmas, decades, max_fraction)

    continuation = None
    if kind == "continuation" or "continuation" in data:
        sigma0 = v.take("continuation", "sigma0", (int, float), required=(kind == "continuation"),
                        default=0.5, check=lambda x: x > 0, expect="> 0")
        alpha = v.take("continuation", "alpha", (int, float), required=(kind == "continuation"),
                       default=0.95, check=lambda x: x > 0, expect="in (0, (k+4)/(2k))")
        c0 = v.take("continuation", "c0", (int, float), default=1.0, check=lambda x: x > 0, expect="> 0")
        c_ac = v.take("continuation", "c_ac", (int, float), default=0.0,
                      check=lambda x: x >= 0, expect=">= 0 (0 = fit at run time)")
        a = v.take("continuation", "a", (int, float), default=20.0, check=lambda x: x > 1, expect="> 1")
        s_cont = v.take("continuation", "s", (int, float), default=1.0)
        multiples = v.take("continuation", "t0_multiples", list, default=[1.0, 2.0, 4.0, 8.0],
                           check=_float_list, expect="list of reals")
        induction_steps = v.take("continuation", "induction_steps", int, default=3,
                                 check=lambda n: n >= 1, expect=">= 1")
        if kind == "continuation" and k is not None:
            if k < 4 or k % 2 != 0:
                v.error("solver.k", "k must be even >= 4 for the continuation experiment")
            if mu is not None and mu != -1:
                v.error("solver.mu", "continuation experiment covers only mu = -1")
            if alpha is not None and not (0 < alpha < (k + 4) / (2 * k)):
                v.error("continuation.alpha", f"alpha must lie in (0, {(k + 4) / (2 * k):g})")
            if s_cont is not None and s_cont <= (k - 4) / (2 * k):
                v.error("continuation.s", f"s must exceed (k-4)/(2k) = {(k - 4) / (2 * k):g}")
        continuation = ContinuationSpec(
            sigma0=sigma0, alpha=alpha, c0=c0, c_ac=c_ac, a=a, s=s_cont,
            t0_multiples=[float(m) for m in (multiples or [])],
            induction_steps=induction_steps,
        )

    probe = None
    if kind == "probe" or "probe" in data:
        p_s = v.take("probe", "s", (int, float), default=0.1)
        p_b = v.take("probe", "b", (int, float), default=0.55, check=lambda x: x > 0.5, expect="> 1/2")
        p_eps = v.take("probe", "eps", (int, float), default=0.05,
                       check=lambda x: 0 < x <= 0.1, expect="in (0, 0.1]")
        p_sigma = v.take("probe", "sigma", (int, float), default=0.0, check=lambda x: x >= 0, expect=">= 0")
        p_n = v.take("probe", "ensemble_size", int, default=20, check=lambda n: n >= 20, expect=">= 20")
        p_hl = v.take("probe", "half_length_pi", (int, float), default=4.0,
                      check=lambda x: x > 0, expect="> 0")
        p_modes = v.take("probe", "n_modes", int, default=128,
                         check=lambda n: n >= 16 and (n & (n - 1)) == 0, expect="power of two >= 16")
        p_nt = v.take("probe", "n_time", int, default=128, check=lambda n: n >= 16, expect=">= 16")
        p_te = v.take("probe", "t_extent", (int, float), default=8.0, check=lambda x: x > 0, expect="> 0")
        p_alpha = v.take("probe", "alpha", (int, float), default=0.95,
                         check=lambda x: x >= 0, expect=">= 0")
        p_fs = v.take("probe", "f_sigmas", list, default=[0.0, 0.05, 0.1, 0.2, 0.4],
                      check=_float_list, expect="list of reals >= 0")
        p_refine = v.take("probe", "refine_check", bool, default=True, expect="boolean")
        if kind == "probe" and k is not None and p_s is not None and p_s <= (k - 4) / (2 * k):
            v.error("probe.s", f"s must exceed (k-4)/(2k) = {(k - 4) / (2 * k):g}")
        probe = ProbeSpec(
            s=p_s, b=p_b, eps=p_eps, sigma=p_sigma, ensemble_size=p_n,
            half_length_pi=p_hl, n_modes=p_modes, n_time=p_nt, t_extent=p_te,
            alpha=p_alpha, f_sigmas=[float(x) for x in (p_fs or [])], refine_check=p_refine,
        )

    if kind in ("simulate", "energy") and sigma and dt and stride and sigma > 0:
        if stride * dt > 1e-2 * (1 + 1e-9):
            v.error(
                "solver.monitor_stride",
                f"monitor spacing {stride * dt:g} exceeds 0.01; the weighted-energy "
                "identity quadrature needs monitor_stride * dt <= 0.01",
            )
    if kind == "continuation" and init_kind == "soliton":
        v.error("initial_data.kind", "continuation needs defocusing data; the soliton is focusing")

    v.reject_unknown()
    if v.problems:
        raise ConfigValidationError(sorted(v.problems))

    return ExperimentConfig(
        kind=kind,
        seed=seed,
        grid=GridSpec(half_pi * math.pi, n_modes),
        solver_k=k,
        solver_mu=mu,
        dt=float(dt),
        t_final=float(t_final),
        monitor_stride=stride,
        noise_floor=float(noise_floor),
        skew_symmetric=skew,
        gevrey=GevreyParams(float(sigma), float(s_idx), float(amp_guard), float(fit_floor)),
        initial=InitialDataSpec(init_kind, float(amplitude), float(decay), float(width), float(x0), float(c)),
        output_dir=out_dir,
        output_format=out_format,
        sweep=sweep,
        continuation=continuation,
        probe=probe,
    )
