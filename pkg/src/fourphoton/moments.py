"""Spectral moments J2F, J4F and the stimulation parameter chi.

The fourfold integral for J4F is reduced to contractions of the idler kernel

    M(w2, w2') = int dw1 F(w1) P(w1, w2) conj(P(w1, w2'))

so that ``J2F = int dw2 M(w2, w2)`` and ``J4F = int dw2 dw2' |M(w2, w2')|^2``.
With quadrature weights folded in, chi is the purity of the normalized kernel.
"""

import json
import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConvergenceError, DegenerateInputError, DomainError, ExchangeTermWarning
from .quadrature import Rule
from .spectra import (
    DEFAULT_SPAN,
    FrequencyGrid,
    GaussianFilter,
    JointAmplitude,
    PhaseMatching,
    make_gaussian_pump,
)

DEFAULT_TOLERANCE = 1e-4

# relative slack for the positive-semidefiniteness check
_PSD_EPS = 1e-9


@dataclass(frozen=True)
class MomentConfig:
    signal_grid: FrequencyGrid
    idler_grid: FrequencyGrid
    intensity: float = 1.0
    rule: Rule = Rule.GAUSS_LEGENDRE
    refinement: int = 1
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        object.__setattr__(self, "rule", Rule(self.rule))
        if not self.intensity > 0:
            raise DomainError("pump intensity scale must be positive")
        if self.refinement < 1:
            raise DomainError("refinement must be at least 1")
        if not self.tolerance > 0:
            raise DomainError("tolerance must be positive")

    def refined(self, factor=2):
        return MomentConfig(self.signal_grid.refined(factor), self.idler_grid.refined(factor),
                            self.intensity, self.rule, self.refinement, self.tolerance)


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """Idler kernel sampled on quadrature nodes.

    ``values[j, k] = M(nodes[j], nodes[k])``; integrals over the idler are
    sums with ``weights``.
    """

    nodes: np.ndarray
    weights: np.ndarray
    values: np.ndarray
    grid_points: int = 0
    error_estimate: float = 0.0
    hermiticity_correction: float = 0.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        n = values.shape[0]
        if values.shape != (n, n) or np.shape(self.weights) != (n,) or np.shape(self.nodes) != (n,):
            raise DomainError("kernel must be square and match its nodes and weights")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        object.__setattr__(self, "nodes", np.asarray(self.nodes, dtype=float))
        if not self.grid_points:
            object.__setattr__(self, "grid_points", n)

    def weighted(self):
        """``sqrt(W) M sqrt(W)``, whose spectrum is that of the integral operator."""
        s = np.sqrt(self.weights)
        return s[:, None] * self.values * s[None, :]

    def eigenvalues(self):
        """Eigenvalues of the integral operator in descending order."""
        return np.linalg.eigvalsh(self.weighted())[::-1]

    def check(self, rtol=1e-10):
        """Raise :class:`DomainError` unless the kernel is Hermitian and PSD."""
        m = self.values
        scale = np.abs(m).max() or 1.0
        if np.abs(m - m.conj().T).max() > rtol * scale:
            raise DomainError("kernel is not Hermitian")
        diag = np.diag(m)
        if np.abs(diag.imag).max() > rtol * scale or diag.real.min() < -rtol * scale:
            raise DomainError("kernel diagonal must be real and nonnegative")
        eig = self.eigenvalues()
        trace = float(np.sum(self.weights * diag.real))
        if eig[-1] < -_PSD_EPS * abs(trace):
            raise DomainError(f"kernel is not positive semidefinite (min eigenvalue {eig[-1]:.3e})")


@dataclass(frozen=True)
class MomentResult:
    j2f: float
    j4f: float
    chi: float
    error_estimate: float = 0.0
    grid_points: int = 0
    hermiticity_correction: float = 0.0

    @classmethod
    def from_moments(cls, j2f, j4f, **extra):
        return cls(j2f, j4f, j4f / j2f**2, **extra)

    def to_dict(self):
        return asdict(self)

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)


def _filter_intensity(filt, x):
    if filt is None:
        return np.ones_like(x)
    values = np.asarray(filt.intensity(x), dtype=float)
    if np.any(values < 0):
        raise DomainError("filter intensity must be nonnegative")
    return values


def _assemble(amplitude, filt, signal_grid, idler_grid, rule):
    x, wx = signal_grid.nodes(rule)
    y, wy = idler_grid.nodes(rule)
    weight = wx * _filter_intensity(filt, x)
    g = amplitude.on_grid(x, y)
    m = g.T @ (weight[:, None] * g.conj())
    scale = np.abs(m).max()
    asym = np.abs(m - m.conj().T).max()
    correction = float(asym / scale) if scale > 0 else 0.0
    m = 0.5 * (m + m.conj().T)
    return KernelMatrix(y, wy, m, idler_grid.points, 0.0, correction)


def _moments(kernel):
    w = kernel.weights
    m = kernel.values
    j2f = float(np.sum(w * np.diag(m).real))
    j4f = float(np.einsum("j,k,jk->", w, w, np.abs(m) ** 2))
    return j2f, j4f


def _relative_change(coarse, fine):
    return abs(coarse - fine) / max(abs(fine), np.finfo(float).tiny)


def build_kernel(amplitude, filt, config):
    """Assemble the idler kernel and certify it by grid doubling.

    The kernel is built at the configured resolution and again with twice the
    points on both axes. The relative change of chi between the two is the
    error estimate. If it exceeds ``config.tolerance`` the resolution is
    doubled (up to ``config.refinement`` times); the coarser kernel of the
    first passing pair is returned. ``filt=None`` means ``F = 1`` over the
    signal window.

    Raises
    ------
    ConvergenceError
        if no doubling brings the error estimate under tolerance.
    """
    if config.signal_grid.overlaps(config.idler_grid):
        warnings.warn(
            "signal and idler windows overlap; the exchange term P(w1,w2)P*(w2,w1) is "
            "neglected but may not vanish",
            ExchangeTermWarning,
            stacklevel=2,
        )
    sig, idl = config.signal_grid, config.idler_grid
    kernel = _assemble(amplitude, filt, sig, idl, config.rule)
    j2f, j4f = _moments(kernel)
    if not j2f > 0:
        raise DegenerateInputError("J2F vanishes: amplitude and filter do not overlap the grid")
    chi = j4f / j2f**2
    estimate = math.inf
    for _ in range(config.refinement):
        sig, idl = sig.refined(), idl.refined()
        fine = _assemble(amplitude, filt, sig, idl, config.rule)
        fj2f, fj4f = _moments(fine)
        fchi = fj4f / fj2f**2
        estimate = _relative_change(chi, fchi)
        if estimate <= config.tolerance:
            return KernelMatrix(kernel.nodes, kernel.weights, kernel.values, kernel.grid_points,
                                estimate, kernel.hermiticity_correction)
        kernel, chi = fine, fchi
    raise ConvergenceError(
        f"chi changed by {estimate:.3e} (relative) under grid doubling; "
        f"tolerance {config.tolerance:.1e}",
        estimate,
    )


def compute_moments(kernel, check=True):
    """J2F, J4F and chi from a kernel.

    Raises :class:`DegenerateInputError` when J2F is not positive.
    """
    if check:
        kernel.check()
    j2f, j4f = _moments(kernel)
    if not j2f > 0:
        raise DegenerateInputError(f"J2F must be positive, got {j2f}")
    return MomentResult.from_moments(
        j2f, j4f,
        error_estimate=kernel.error_estimate,
        grid_points=kernel.grid_points,
        hermiticity_correction=kernel.hermiticity_correction,
    )


def chi_unfiltered(amplitude, config):
    """chi0 = J4/J2^2 of the bare joint amplitude over the configured windows."""
    return compute_moments(build_kernel(amplitude, None, config))


def pair_probabilities(result, intensity):
    """Absolute (P2, P4) for a pump-intensity scale ``intensity``.

    ``P2 = I J2F`` and ``P4 = I^2 (J2F^2 + J4F) / 2``.
    """
    if not intensity > 0:
        raise DomainError("intensity must be positive")
    p2 = intensity * result.j2f
    p4 = 0.5 * intensity**2 * (result.j2f**2 + result.j4f)
    return p2, p4


def chi_closed_form(ratio):
    """``r / sqrt(1 + r^2)`` for Gaussian pump and filter with ``r = delta_p / delta_f``."""
    r = np.asarray(ratio, dtype=float)
    if np.any(~(r > 0)):
        raise DomainError("ratio must be positive")
    chi = r / np.sqrt(1.0 + r * r)
    return float(chi) if chi.ndim == 0 else chi


@dataclass(frozen=True)
class GaussianSolution:
    gamma: float
    gamma_prime: float
    chi: float


def gaussian_intermediates(delta_p, delta_f):
    """Square-completion widths for Gaussian pump and filter.

    ``1/gamma^2 = 1/delta_f^2 + 1/(2 delta_p^2)`` and
    ``1/gamma'^2 = 1/gamma^2 - gamma^2 / (4 delta_p^4)``; then
    ``chi = gamma gamma' / delta_f^2``.
    """
    if not delta_p > 0 or not delta_f > 0:
        raise DomainError("widths must be positive")
    inv_g2 = 1.0 / delta_f**2 + 0.5 / delta_p**2
    g2 = 1.0 / inv_g2
    inv_gp2 = inv_g2 - g2 / (4.0 * delta_p**4)
    gamma, gamma_prime = math.sqrt(g2), 1.0 / math.sqrt(inv_gp2)
    return GaussianSolution(gamma, gamma_prime, gamma * gamma_prime / delta_f**2)


def gaussian_points(ratio, floor=256, span=DEFAULT_SPAN):
    """Points per axis that resolve the narrower Gaussian over both windows."""
    spread = math.sqrt(1.0 + ratio * ratio) / min(ratio, 1.0)
    needed = math.pi * span * spread
    return max(floor, 64 * math.ceil(needed / 64))


def gaussian_setup(ratio, points=None, delta_f=1.0, signal_center=0.0, span=DEFAULT_SPAN,
                   rule=Rule.GAUSS_LEGENDRE, refinement=1, tolerance=DEFAULT_TOLERANCE):
    """Gaussian pump and filter with unity phase matching at ``delta_p / delta_f = ratio``.

    The idler window is placed well clear of the signal window so that the
    exchange term vanishes.
    """
    if not ratio > 0 or not delta_f > 0:
        raise DomainError("ratio and filter width must be positive")
    delta_p = ratio * delta_f
    signal_half = span * delta_f
    idler_half = span * math.hypot(delta_f, delta_p)
    idler_center = signal_center + 2.0 * (signal_half + idler_half)
    n = points or gaussian_points(ratio, span=span)
    pump = make_gaussian_pump(width=delta_p, carrier=signal_center + idler_center)
    amplitude = JointAmplitude(pump, PhaseMatching.unity(signal_center, idler_center))
    filt = GaussianFilter(signal_center, delta_f)
    config = MomentConfig(FrequencyGrid(signal_center, signal_half, n),
                          FrequencyGrid(idler_center, idler_half, n),
                          rule=rule, refinement=refinement, tolerance=tolerance)
    return amplitude, filt, config


def chi_quadrature(ratio, points=None, **kwargs):
    """Numerical chi for the Gaussian model, for comparison with :func:`chi_closed_form`."""
    amplitude, filt, config = gaussian_setup(ratio, points, **kwargs)
    return compute_moments(build_kernel(amplitude, filt, config))
