"""Exponential Fourier weights, Gevrey norms, and the analyticity-radius estimator.

The exponential decay rate of |uhat(xi)| equals the width of the strip around
the real axis to which u extends holomorphically, so the radius is read off
the coefficient tail and exponential weights exp(sigma*|xi|) are only
meaningful while sigma stays below that rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AnalyticityExceededError,
    ConfigurationError,
    InsufficientResolutionError,
)
from .grid import SpectralField

__all__ = [
    "GevreyParams",
    "exp_multiplier",
    "gevrey_norm",
    "estimate_radius",
]

DEFAULT_AMP_GUARD = 700.0
DEFAULT_FIT_FLOOR = 1e-12

# A retained weighted tail rising by more than this many e-folds across the
# band means sigma exceeds the field's decay rate: the continuum norm is
# infinite and the grid value would just track the truncation.
TAIL_GROWTH_MARGIN = 2.0

MIN_FIT_MODES = 8


@dataclass(frozen=True)
class GevreyParams:
    """(sigma, s) weight pair plus the numerical guards for exp(sigma*|xi|)."""

    sigma: float
    s: float = 0.0
    amp_guard: float = DEFAULT_AMP_GUARD
    fit_floor: float = DEFAULT_FIT_FLOOR

    def __post_init__(self):
        if self.sigma < 0:
            raise ConfigurationError(f"sigma must be >= 0, got {self.sigma}")
        if self.amp_guard <= 0:
            raise ConfigurationError(f"amp_guard must be positive, got {self.amp_guard}")
        if not (0.0 < self.fit_floor < 1.0):
            raise ConfigurationError(f"fit_floor must lie in (0, 1), got {self.fit_floor}")


def _retained_mask(mag: np.ndarray, fit_floor: float) -> np.ndarray:
    peak = float(mag.max())
    if peak == 0.0:
        return mag > 0.0
    return mag >= fit_floor * peak


def _check_tail_growth(abs_xi, log_weighted, sigma):
    """Reject sigma values larger than the decay rate of the retained tail."""
    order = np.argsort(abs_xi)
    nret = order.size
    if nret < 3 * MIN_FIT_MODES // 4:
        return
    third = nret // 3
    low = float(np.max(log_weighted[order[:third]]))
    high = float(np.max(log_weighted[order[-third:]]))
    if high - low > TAIL_GROWTH_MARGIN:
        raise AnalyticityExceededError(
            f"exp({sigma:g}*|xi|) amplifies the coefficient tail by "
            f"{high - low:.2f} e-folds across the retained band; sigma exceeds "
            "the field's radius of analyticity"
        )


def _guarded_log_magnitudes(field, sigma, amp_guard, fit_floor, guard_scale=1.0):
    """Shared guard path: noise-floor mask plus overflow and tail checks.

    Returns (mask, log|uhat| on the masked modes).  guard_scale=2 implements
    the squared-weight precondition used by the norm.
    """
    mag = np.abs(field.coeffs)
    if not np.all(np.isfinite(mag)):
        raise AnalyticityExceededError("non-finite coefficients entering exponential weight")
    mask = _retained_mask(mag, fit_floor)
    if not mask.any():
        return mask, np.empty(0)
    abs_xi = np.abs(field.grid.wavenumbers[mask])
    logm = np.log(mag[mask])
    log_weighted = sigma * abs_xi + logm
    if float(np.max(guard_scale * sigma * abs_xi + logm)) > amp_guard:
        raise AnalyticityExceededError(
            f"exp({guard_scale * sigma:g}*|xi|) overflows the amplitude guard "
            f"({amp_guard:g}) on retained modes"
        )
    _check_tail_growth(abs_xi, log_weighted, sigma)
    return mask, logm


def exp_multiplier(
    field: SpectralField,
    sigma: float,
    *,
    amp_guard: float = DEFAULT_AMP_GUARD,
    fit_floor: float = DEFAULT_FIT_FLOOR,
) -> SpectralField:
    """Apply uhat(xi) -> exp(sigma*|xi|) * uhat(xi).

    Modes below fit_floor * max|uhat| are zeroed first so grid noise is never
    exponentially amplified.  sigma=0 is the identity.
    """
    if sigma < 0:
        raise ConfigurationError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0.0:
        return field
    mask, _ = _guarded_log_magnitudes(field, sigma, amp_guard, fit_floor)
    weights = np.exp(sigma * np.abs(field.grid.wavenumbers))
    out = np.where(mask, field.coeffs * weights, 0.0)
    return field.with_coeffs(out)


def gevrey_norm(field: SpectralField, params: GevreyParams) -> float:
    """Weighted L2 norm sqrt( sum (1+|xi|)^(2s) exp(2*sigma*|xi|) |uhat|^2 d_xi )."""
    sigma, s = params.sigma, params.s
    mask, logm = _guarded_log_magnitudes(
        field, sigma, params.amp_guard, params.fit_floor, guard_scale=2.0
    )
    if not mask.any():
        return 0.0
    abs_xi = np.abs(field.grid.wavenumbers[mask])
    log_terms = 2.0 * sigma * abs_xi + 2.0 * logm + 2.0 * s * np.log1p(abs_xi)
    peak = float(np.max(log_terms))
    total = float(np.sum(np.exp(log_terms - peak))) * field.grid.mode_spacing
    log_sq = peak + math.log(total)
    if log_sq > 2.0 * params.amp_guard:
        raise AnalyticityExceededError(
            f"Gevrey norm overflows double precision at sigma={sigma:g}"
        )
    return math.exp(0.5 * log_sq)


def _envelope_points(abs_xi, log_mag, n_bins):
    """Upper envelope of (|xi|, log|uhat|) by per-bin maxima.

    Evolved fields have oscillatory coefficients whose near-zeros would drag
    a raw least-squares fit; the envelope tracks the decay rate instead.
    """
    lo, hi = abs_xi[0], abs_xi[-1]
    edges = np.linspace(lo, hi, n_bins + 1)
    xs, ys = [], []
    for b in range(n_bins):
        if b + 1 < n_bins:
            sel = (abs_xi >= edges[b]) & (abs_xi < edges[b + 1])
        else:
            sel = (abs_xi >= edges[b]) & (abs_xi <= edges[b + 1])
        if not sel.any():
            continue
        i = np.argmax(log_mag[sel])
        xs.append(abs_xi[sel][i])
        ys.append(log_mag[sel][i])
    return np.asarray(xs), np.asarray(ys)


def estimate_radius(field: SpectralField, params: GevreyParams) -> float:
    """Radius of analyticity read off the exponential decay of |uhat(xi)|.

    Fits log|uhat| against |xi| over the band between the first mode below a
    tenth of the peak and the relative noise floor, on the per-bin upper
    envelope.  Returns +inf when the decay is superexponential (systematic
    concave-down curvature), since any finite fitted rate would be an
    artifact of the grid.
    """
    mag = np.abs(field.coeffs)
    peak = float(mag.max())
    if peak == 0.0:
        raise ConfigurationError("cannot estimate the radius of the zero field")

    xi = field.grid.wavenumbers
    pos = xi > 0
    abs_xi = xi[pos]
    m = mag[pos]
    order = np.argsort(abs_xi)
    abs_xi, m = abs_xi[order], m[order]

    below_head = np.nonzero(m < peak / 10.0)[0]
    if below_head.size == 0:
        raise InsufficientResolutionError(
            "spectrum never drops below a tenth of its peak; no decay band to fit"
        )
    start = below_head[0]
    above_floor = m > params.fit_floor * peak
    band = above_floor.copy()
    band[:start] = False
    last = np.nonzero(band)[0]
    if last.size == 0 or last[-1] <= start:
        raise InsufficientResolutionError("decay band is empty after noise-floor cut")
    band[last[-1] + 1 :] = False

    bx = abs_xi[band]
    by = np.log(m[band])
    if bx.size < MIN_FIT_MODES:
        raise InsufficientResolutionError(
            f"only {bx.size} usable modes in the fit band (need >= {MIN_FIT_MODES})"
        )

    n_bins = int(min(32, max(6, bx.size // 6)))
    ex, ey = _envelope_points(bx, by, n_bins)

    slope, intercept = np.polyfit(ex, ey, 1)
    resid = ey - (intercept + slope * ex)
    quad = np.polyfit(ex, ey, 2)
    concave_down = quad[0] < 0.0
    if concave_down and float(resid.max() - resid.min()) > 2.0:
        return math.inf
    return max(-float(slope), 0.0)
