"""Periodic spectral substrate: grid, transforms, derivatives, Airy flow, dealiased powers.

Domain is [-L, L) with N equispaced points, N a power of two.  A real field
u is stored through its Fourier coefficients ``uhat`` in numpy FFT order.

Normalization convention (fixed here, asserted by the Parseval tests): the
stored coefficient at wavenumber xi_j = pi*j/L is the trapezoid quadrature of
the continuum transform

    uhat(xi) = (2*pi)**-0.5 * integral exp(-i*x*xi) u(x) dx,

i.e. ``uhat = fft(u) * dx / sqrt(2*pi)``.  With the mode spacing
d_xi = pi/L this makes

    sum |uhat|^2 * d_xi  ==  integral u^2 dx

exact for band-limited u, so weighted-coefficient sums computed elsewhere
(Gevrey norms, energies) are direct discretizations of the continuum
integrals they stand for.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, IntegrityError, ResourceLimitError

__all__ = [
    "GridSpec",
    "SpectralField",
    "forward_transform",
    "inverse_transform",
    "spectral_derivative",
    "airy_propagator",
    "dealiased_power",
    "dealiased_product",
]

# Largest padded transform dealiasing is allowed to allocate (complex points).
PAD_POINT_CAP = 1 << 24

_SQRT_2PI = float(np.sqrt(2.0 * np.pi))


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on [-half_length, half_length).

    Equality is decided by (half_length, n_modes); the remaining fields are
    derived arrays.
    """

    half_length: float
    n_modes: int
    dx: float = field(init=False, compare=False)
    wavenumbers: np.ndarray = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        n = self.n_modes
        if n < 16 or (n & (n - 1)) != 0:
            raise ConfigurationError(f"n_modes must be a power of two >= 16, got {n}")
        if self.half_length <= 0:
            raise ConfigurationError(f"half_length must be positive, got {self.half_length}")
        dx = 2.0 * self.half_length / n
        object.__setattr__(self, "dx", dx)
        xi = 2.0 * np.pi * np.fft.fftfreq(n, d=dx)
        xi.flags.writeable = False
        object.__setattr__(self, "wavenumbers", xi)
        # Nyquist mode (index n/2, value -pi*n/(2L)) has no +xi partner; odd
        # multipliers must vanish there to keep real fields real.
        xi_d = xi.copy()
        xi_d[n // 2] = 0.0
        xi_d.flags.writeable = False
        object.__setattr__(self, "_derivative_wavenumbers", xi_d)
        # exp(i*xi_j*L) = (-1)^j: aligns the DFT (index origin) with the
        # centered coordinate so coefficients match the continuum transform
        phase = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
        phase.flags.writeable = False
        object.__setattr__(self, "_origin_phase", phase)

    @property
    def points(self) -> np.ndarray:
        return -self.half_length + self.dx * np.arange(self.n_modes)

    @property
    def mode_spacing(self) -> float:
        """d_xi = pi / half_length, the quadrature weight for coefficient sums."""
        return np.pi / self.half_length

    @property
    def derivative_wavenumbers(self) -> np.ndarray:
        """Wavenumbers for the multiplier calculus, unpaired Nyquist zeroed.

        The lone Nyquist mode carries no phase information (its +xi partner
        is not representable), so it is excluded from every derivative and
        flow multiplier; this keeps real fields real and makes d/dx applied
        twice agree exactly with d^2/dx^2.  Plain norms and Parseval sums
        keep the full set.
        """
        return self._derivative_wavenumbers


@dataclass(frozen=True)
class SpectralField:
    """One real periodic field, stored as complex coefficients in FFT order."""

    grid: GridSpec
    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=np.complex128)
        if arr.shape != (self.grid.n_modes,):
            raise ConfigurationError(
                f"coefficient array has shape {arr.shape}, expected ({self.grid.n_modes},)"
            )
        if arr is self.coeffs:
            arr = arr.copy()  # never freeze or alias a caller-owned buffer
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    def l2_norm(self) -> float:
        """Continuum L2 norm, sqrt(integral u^2 dx), via the Parseval sum."""
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2) * self.grid.mode_spacing))

    def with_coeffs(self, coeffs: np.ndarray) -> "SpectralField":
        return SpectralField(self.grid, coeffs)


def forward_transform(samples: np.ndarray, grid: GridSpec) -> SpectralField:
    """Real samples on the grid -> normalized Fourier coefficients."""
    samples = np.asarray(samples, dtype=np.float64)
    if samples.shape != (grid.n_modes,):
        raise ConfigurationError(
            f"sample array has length {samples.shape}, grid has {grid.n_modes} points"
        )
    coeffs = np.fft.fft(samples) * (grid._origin_phase * (grid.dx / _SQRT_2PI))
    return SpectralField(grid, coeffs)


def hermitian_defect(field: SpectralField) -> float:
    """Max deviation from uhat(-xi) == conj(uhat(xi)), relative to max |uhat|."""
    c = field.coeffs
    n = field.grid.n_modes
    reflected = np.conj(c[(-np.arange(n)) % n])
    scale = max(1.0, float(np.max(np.abs(c)))) if np.all(np.isfinite(c)) else np.inf
    if not np.isfinite(scale):
        return np.inf
    return float(np.max(np.abs(c - reflected))) / scale


def inverse_transform(field: SpectralField, symmetry_tol: float = 1e-10) -> np.ndarray:
    """Coefficients -> real samples; raises IntegrityError on broken symmetry."""
    if not np.all(np.isfinite(field.coeffs)):
        raise IntegrityError("non-finite Fourier coefficients (upstream overflow?)")
    defect = hermitian_defect(field)
    if defect > symmetry_tol:
        raise IntegrityError(
            f"Hermitian symmetry violated: relative defect {defect:.3e} > {symmetry_tol:.1e}"
        )
    u = np.fft.ifft(field.coeffs * (field.grid._origin_phase * (_SQRT_2PI / field.grid.dx)))
    return np.ascontiguousarray(u.real)


def spectral_derivative(field: SpectralField, order: int) -> SpectralField:
    """Multiply by (i*xi)**order on the derivative wavenumbers."""
    if order not in (1, 2, 3, 4):
        raise ConfigurationError(f"derivative order must be in 1..4, got {order}")
    xi = field.grid.derivative_wavenumbers
    return field.with_coeffs(field.coeffs * (1j * xi) ** order)


def airy_phase(grid: GridSpec, t: float) -> np.ndarray:
    """Unimodular multiplier exp(i*t*xi^3) of the linear dispersive flow.

    Uses the Nyquist-zeroed odd wavenumbers so the flow is exactly the
    exponential of the discrete third-derivative operator: unitary, a group
    in t, and realness-preserving.
    """
    return np.exp(1j * t * grid.derivative_wavenumbers**3)


def airy_propagator(field: SpectralField, t: float) -> SpectralField:
    """Exact linear flow of u_t + u_xxx = 0 over time t."""
    return field.with_coeffs(field.coeffs * airy_phase(field.grid, t))


def _series_coeffs(coeffs: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Convert stored coefficients to plain Fourier-series coefficients c_j."""
    return coeffs * (_SQRT_2PI / (2.0 * grid.half_length))


def _from_series_coeffs(series: np.ndarray, grid: GridSpec) -> np.ndarray:
    return series * (2.0 * grid.half_length / _SQRT_2PI)


def _padded_samples(series: np.ndarray, n: int, m: int) -> np.ndarray:
    """Physical samples of the band-limited interpolant on an m-point grid."""
    pad = np.zeros(m, dtype=np.complex128)
    half = n // 2
    pad[:half] = series[:half]
    pad[m - half + 1 :] = series[half + 1 :]
    # split the self-conjugate Nyquist coefficient across +/- slots so the
    # fine-grid samples stay real
    pad[half] = 0.5 * series[half]
    pad[m - half] = 0.5 * series[half]
    return np.fft.ifft(pad).real * m


def _truncate_to_band(series_fine: np.ndarray, n: int, m: int) -> np.ndarray:
    """Exact band-limited truncation of fine-grid series coefficients.

    The coarse Nyquist slot is zeroed: it is the one slot an alias can reach
    when the pad is at the minimum size, and products always sit under a
    derivative that zeroes it anyway.
    """
    out = np.zeros(n, dtype=np.complex128)
    half = n // 2
    out[:half] = series_fine[:half]
    out[half + 1 :] = series_fine[m - half + 1 :]
    return out


def _pad_size(n: int, p: int) -> int:
    return -(-(p + 1) // 2) * n  # ceil((p+1)/2) * n


def dealiased_product(fields: list[SpectralField]) -> SpectralField:
    """Pointwise product of real fields, alias-free in the retained band.

    Evaluates on a zero-padded grid of ceil((p+1)/2)*N points (p = number of
    factors) so that no wrapped-around mode of the degree-p product lands in
    the retained band, then truncates back.
    """
    if len(fields) < 2:
        raise ConfigurationError("product needs at least two factors")
    grid = fields[0].grid
    for f in fields[1:]:
        if f.grid is not grid and f.grid != grid:
            raise ConfigurationError("all factors must share one grid")
    p = len(fields)
    n = grid.n_modes
    m = _pad_size(n, p)
    if m > PAD_POINT_CAP:
        raise ResourceLimitError(
            f"dealiased product of degree {p} on {n} modes needs a padded "
            f"transform of {m} points (cap {PAD_POINT_CAP})"
        )
    # overflow here just means the solution is blowing up; the solver's
    # finiteness check reports it
    with np.errstate(over="ignore", invalid="ignore"):
        w = _padded_samples(_series_coeffs(fields[0].coeffs, grid), n, m)
        for f in fields[1:]:
            w = w * _padded_samples(_series_coeffs(f.coeffs, grid), n, m)
        series_fine = np.fft.fft(w) / m
    out = _truncate_to_band(series_fine, n, m)
    return SpectralField(grid, _from_series_coeffs(out, grid))


def dealiased_power(field: SpectralField, p: int) -> SpectralField:
    """Fourier coefficients of u**p restricted to the grid band, alias-free."""
    if p < 2:
        raise ConfigurationError(f"power must be >= 2, got {p}")
    grid = field.grid
    n = grid.n_modes
    m = _pad_size(n, p)
    if m > PAD_POINT_CAP:
        raise ResourceLimitError(
            f"dealiased power {p} on {n} modes needs a padded transform of "
            f"{m} points (cap {PAD_POINT_CAP})"
        )
    with np.errstate(over="ignore", invalid="ignore"):
        u = _padded_samples(_series_coeffs(field.coeffs, grid), n, m)
        series_fine = np.fft.fft(u**p) / m
    out = _truncate_to_band(series_fine, n, m)
    return SpectralField(grid, _from_series_coeffs(out, grid))


def integral_of_power(field: SpectralField, p: int) -> float:
    """integral u**p dx via the alias-free zero mode of the dealiased power."""
    w = dealiased_power(field, p)
    return float(w.coeffs[0].real) * _SQRT_2PI


def projected_transform(profile, grid: GridSpec, refine: int = 4) -> SpectralField:
    """Alias-free band projection of a callable profile u(x).

    Pointwise sampling folds every unresolved tail mode back onto the band;
    for profiles with slowly decaying transforms that aliasing dominates the
    discretization error.  Evaluating on a refine-times finer grid and
    truncating the transform removes it.
    """
    if refine < 2 or (refine & (refine - 1)) != 0:
        raise ConfigurationError(f"refine must be a power of two >= 2, got {refine}")
    fine = GridSpec(grid.half_length, refine * grid.n_modes)
    fhat = forward_transform(np.asarray(profile(fine.points), dtype=np.float64), fine)
    n, half = grid.n_modes, grid.n_modes // 2
    out = np.zeros(n, dtype=np.complex128)
    out[:half] = fhat.coeffs[:half]
    out[half + 1 :] = fhat.coeffs[fine.n_modes - half + 1 :]
    return SpectralField(grid, out)
