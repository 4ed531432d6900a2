"""Spectral building blocks: pump pulse, filter, phase matching and the joint amplitude.

Frequencies are dimensionless throughout: an angular frequency (or detuning)
divided by a reference bandwidth chosen by the caller. Times are measured in
the reciprocal unit. Only the helpers that take wavelengths in nm or
durations in fs deal with physical units.

Width convention
----------------
A Gaussian spectral amplitude is written ``exp(-(w - w0)**2 / (4 * D**2))`` and
``D`` is stored as its width. ``D`` is then the standard deviation of the
power spectrum ``|amplitude|**2``. This is the ``amplitude-sigma`` convention
and it is used for both the pump (``D = delta_p``) and the filter, whose
intensity transmission is ``exp(-(w - w1)**2 / (2 * delta_f**2))``.
"""

import csv
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.constants import c as _SPEED_OF_LIGHT
from scipy.interpolate import RegularGridInterpolator

from .errors import DomainError, GaussianApproximationWarning, OutOfRangeError
from .quadrature import Rule, nodes_and_weights

#: Speed of light in nm per fs.
C_NM_PER_FS = _SPEED_OF_LIGHT * 1e9 / 1e15

#: Gaussian time-bandwidth constant used for interference filters.
TIME_BANDWIDTH_GAUSSIAN = 0.44

#: Default truncation of Gaussian supports, in widths.
DEFAULT_SPAN = 8.0

# relative bandwidth above which the Gaussian filter model is flagged
_GAUSSIAN_FILTER_MAX_RELATIVE_BANDWIDTH = 0.02

_FWHM_PER_SIGMA = 2.0 * math.sqrt(2.0 * math.log(2.0))


class WidthConvention(str, Enum):
    AMPLITUDE_SIGMA = "amplitude-sigma"
    INTENSITY_FWHM = "intensity-FWHM"


class RatioConvention(str, Enum):
    SIGMA_RATIO = "sigma-ratio"
    FWHM_RATIO = "fwhm-ratio"


@dataclass(frozen=True)
class FrequencyGrid:
    """A symmetric sampling window ``[center - halfwidth, center + halfwidth]``."""

    center: float
    halfwidth: float
    points: int

    def __post_init__(self):
        if int(self.points) != self.points or self.points < 2:
            raise DomainError(f"points must be an integer >= 2, got {self.points}")
        if not self.halfwidth > 0:
            raise DomainError(f"halfwidth must be positive, got {self.halfwidth}")
        if not math.isfinite(self.center):
            raise DomainError("center must be finite")

    @classmethod
    def around(cls, center, width, points, span=DEFAULT_SPAN):
        """Grid covering ``span`` widths on either side of ``center``."""
        return cls(center, span * width, points)

    @property
    def lower(self):
        return self.center - self.halfwidth

    @property
    def upper(self):
        return self.center + self.halfwidth

    def nodes(self, rule=Rule.GAUSS_LEGENDRE):
        return nodes_and_weights(self.lower, self.upper, self.points, rule)

    def refined(self, factor=2):
        return FrequencyGrid(self.center, self.halfwidth, self.points * factor)

    def overlaps(self, other):
        return self.lower < other.upper and other.lower < self.upper


def _convert_width(value, convention):
    convention = WidthConvention(convention)
    if convention is WidthConvention.AMPLITUDE_SIGMA:
        return value, 1.0
    factor = 1.0 / _FWHM_PER_SIGMA
    return value * factor, factor


def _convert_duration(value, convention):
    # transform-limited Gaussian: |E(t)|^2 ~ exp(-2 delta_p^2 t^2)
    convention = WidthConvention(convention)
    if convention is WidthConvention.AMPLITUDE_SIGMA:
        factor = 0.5
    else:
        factor = math.sqrt(2.0 * math.log(2.0))
    return factor / value, factor


@dataclass(frozen=True)
class GaussianPump:
    """Transform-limited Gaussian pump amplitude.

    ``g(w) = sqrt(normalization) * (2 pi width^2)^(-1/4)
    * exp(-(w - carrier)^2 / (4 width^2) + i phase)``, so that the power
    spectrum integrates to ``normalization``.
    """

    carrier: float
    width: float
    normalization: float = 1.0
    phase: float = 0.0
    conversion: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.width > 0:
            raise DomainError(f"pump width must be positive, got {self.width}")
        if not self.normalization > 0:
            raise DomainError("pump normalization must be positive")

    def __call__(self, omega):
        omega = np.asarray(omega, dtype=float)
        prefactor = math.sqrt(self.normalization) * (2.0 * math.pi * self.width**2) ** -0.25
        value = prefactor * np.exp(-((omega - self.carrier) ** 2) / (4.0 * self.width**2))
        if self.phase:
            return value * np.exp(1j * self.phase)
        return value.astype(complex)

    def power(self, omega):
        return np.abs(self(omega)) ** 2

    def grid(self, points, span=DEFAULT_SPAN):
        return FrequencyGrid.around(self.carrier, self.width, points, span)

    @property
    def coherence_time(self):
        return 1.0 / self.width


def make_gaussian_pump(
    *,
    duration=None,
    width=None,
    convention=WidthConvention.AMPLITUDE_SIGMA,
    carrier=0.0,
    normalization=1.0,
    reference_bandwidth=1.0,
):
    """Build a :class:`GaussianPump` from either a spectral width or a pulse duration.

    Parameters
    ----------
    duration : float, optional
        Pulse duration in time units. With ``intensity-FWHM`` it is the FWHM
        of ``|E(t)|^2``; with ``amplitude-sigma`` it is the rms duration of
        ``|E(t)|^2``.
    width : float, optional
        Spectral width in scaled frequency, read with ``convention``.
    reference_bandwidth : float
        Angular frequency unit (rad per time unit) used to make ``duration``
        dimensionless.

    The factor applied to the input is kept in ``pump.conversion``.
    """
    if (duration is None) == (width is None):
        raise DomainError("provide exactly one of duration or width")
    convention = WidthConvention(convention)
    if width is not None:
        if not width > 0:
            raise DomainError(f"width must be positive, got {width}")
        delta_p, factor = _convert_width(width, convention)
        conversion = {"input": "width", "convention": convention.value, "value": width,
                      "delta_p_per_width": factor}
    else:
        if not duration > 0 or not reference_bandwidth > 0:
            raise DomainError("duration and reference bandwidth must be positive")
        delta_p, factor = _convert_duration(duration * reference_bandwidth, convention)
        conversion = {"input": "duration", "convention": convention.value, "value": duration,
                      "reference_bandwidth": reference_bandwidth,
                      "delta_p_times_duration": factor}
    return GaussianPump(carrier, delta_p, normalization, conversion=conversion)


def pump_duration(pump, convention=WidthConvention.INTENSITY_FWHM, reference_bandwidth=1.0):
    """Inverse of the duration branch of :func:`make_gaussian_pump`."""
    _, factor = _convert_duration(1.0, convention)
    return factor / pump.width / reference_bandwidth


@dataclass(frozen=True)
class GaussianFilter:
    """Gaussian interference filter, ``F(w) = peak * exp(-(w - center)^2 / (2 width^2))``."""

    center: float
    width: float
    peak: float = 1.0

    def __post_init__(self):
        if not self.width > 0:
            raise DomainError(f"filter width must be positive, got {self.width}")
        if not 0.0 < self.peak <= 1.0:
            raise DomainError(f"peak transmission must lie in (0, 1], got {self.peak}")

    def intensity(self, omega):
        omega = np.asarray(omega, dtype=float)
        return self.peak * np.exp(-((omega - self.center) ** 2) / (2.0 * self.width**2))

    def amplitude(self, omega):
        return np.sqrt(self.intensity(omega))

    def integral(self):
        return self.peak * math.sqrt(2.0 * math.pi) * self.width

    def grid(self, points, span=DEFAULT_SPAN):
        return FrequencyGrid.around(self.center, self.width, points, span)

    @property
    def coherence_time(self):
        return 1.0 / self.width


def make_gaussian_filter(width, convention=WidthConvention.AMPLITUDE_SIGMA, center=0.0, peak=1.0):
    """Filter from a width read with ``convention`` (FWHM refers to ``F`` itself)."""
    if not width > 0:
        raise DomainError(f"width must be positive, got {width}")
    delta_f, _ = _convert_width(width, convention)
    return GaussianFilter(center, delta_f, peak)


@dataclass(frozen=True, eq=False)
class TabulatedProfile:
    """Complex profile sampled on a strictly increasing grid, linearly interpolated."""

    omega: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if omega.ndim != 1 or omega.shape != values.shape or omega.size < 2:
            raise DomainError("omega and values must be 1-D arrays of equal length >= 2")
        if not np.all(np.diff(omega) > 0):
            raise DomainError("omega must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise DomainError("tabulated values must be finite")
        omega.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "values", values)

    def __call__(self, omega):
        omega = np.asarray(omega, dtype=float)
        if omega.size and (omega.min() < self.omega[0] or omega.max() > self.omega[-1]):
            raise OutOfRangeError(
                f"profile sampled on [{self.omega[0]}, {self.omega[-1]}] "
                f"queried on [{omega.min()}, {omega.max()}]"
            )
        re = np.interp(omega, self.omega, self.values.real)
        im = np.interp(omega, self.omega, self.values.imag)
        return re + 1j * im

    @property
    def is_real(self):
        return not np.any(self.values.imag)

    @classmethod
    def from_csv(cls, path):
        """Read ``omega,re`` or ``omega,re,im`` columns (header row required)."""
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = [h.strip() for h in next(reader)]
            if header not in (["omega", "re"], ["omega", "re", "im"]):
                raise DomainError(f"unexpected CSV header {header}")
            rows = [[float(v) for v in row] for row in reader if row]
        data = np.array(rows, dtype=float).reshape(-1, len(header))
        values = data[:, 1] if len(header) == 2 else data[:, 1] + 1j * data[:, 2]
        return cls(data[:, 0], values)

    def to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            if self.is_real:
                writer.writerow(["omega", "re"])
                for w, v in zip(self.omega, self.values):
                    writer.writerow([repr(float(w)), repr(float(v.real))])
            else:
                writer.writerow(["omega", "re", "im"])
                for w, v in zip(self.omega, self.values):
                    writer.writerow([repr(float(w)), repr(float(v.real)), repr(float(v.imag))])


@dataclass(frozen=True)
class TabulatedFilter:
    """Filter whose intensity transmission is read from a real tabulated profile."""

    profile: TabulatedProfile

    def __post_init__(self):
        if not self.profile.is_real or np.any(self.profile.values.real < 0):
            raise DomainError("filter transmission must be real and nonnegative")

    def intensity(self, omega):
        return self(omega)

    def __call__(self, omega):
        return self.profile(omega).real

    def amplitude(self, omega):
        return np.sqrt(self.intensity(omega))


class PhaseMatchingMode(str, Enum):
    UNITY = "unity"
    GAUSSIAN = "gaussian"
    TABULATED = "tabulated"


@dataclass(frozen=True, eq=False)
class PhaseMatching:
    """Phase-matching function peaked near ``(signal_carrier, idler_carrier)``.

    Use the :meth:`unity`, :meth:`gaussian` and :meth:`tabulated` constructors.
    The Gaussian form is ``exp(-(w1 - W1)^2 / (4 width^2))``, optionally times
    the same factor in the idler with ``idler_width``.
    """

    mode: PhaseMatchingMode
    signal_carrier: float
    idler_carrier: float
    width: float = None
    idler_width: float = None
    table: tuple = None
    _interp: tuple = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "mode", PhaseMatchingMode(self.mode))
        if self.signal_carrier == self.idler_carrier:
            raise DomainError("signal and idler carriers must differ (non-degenerate emission)")
        if self.mode is PhaseMatchingMode.GAUSSIAN:
            if self.width is None or not self.width > 0:
                raise DomainError("gaussian phase matching needs a positive width")
            if self.idler_width is not None and not self.idler_width > 0:
                raise DomainError("idler_width must be positive")
        if self.mode is PhaseMatchingMode.TABULATED:
            w1, w2, values = self.table
            w1 = np.asarray(w1, dtype=float)
            w2 = np.asarray(w2, dtype=float)
            values = np.asarray(values, dtype=complex)
            if values.shape != (w1.size, w2.size):
                raise DomainError("table values must have shape (len(omega1), len(omega2))")
            if not (np.all(np.diff(w1) > 0) and np.all(np.diff(w2) > 0)):
                raise DomainError("table axes must be strictly increasing")
            if not np.all(np.isfinite(values)):
                raise DomainError("tabulated phase matching must be finite")
            interp = (
                RegularGridInterpolator((w1, w2), values.real, bounds_error=True),
                RegularGridInterpolator((w1, w2), values.imag, bounds_error=True),
            )
            object.__setattr__(self, "table", (w1, w2, values))
            object.__setattr__(self, "_interp", interp)

    @classmethod
    def unity(cls, signal_carrier, idler_carrier):
        return cls(PhaseMatchingMode.UNITY, signal_carrier, idler_carrier)

    @classmethod
    def gaussian(cls, signal_carrier, idler_carrier, width, idler_width=None):
        return cls(PhaseMatchingMode.GAUSSIAN, signal_carrier, idler_carrier, width, idler_width)

    @classmethod
    def tabulated(cls, signal_carrier, idler_carrier, omega1, omega2, values):
        return cls(PhaseMatchingMode.TABULATED, signal_carrier, idler_carrier,
                   table=(omega1, omega2, values))

    def __call__(self, omega1, omega2):
        omega1, omega2 = np.broadcast_arrays(np.asarray(omega1, float), np.asarray(omega2, float))
        if self.mode is PhaseMatchingMode.UNITY:
            return np.ones(omega1.shape, dtype=complex)
        if self.mode is PhaseMatchingMode.GAUSSIAN:
            expo = -((omega1 - self.signal_carrier) ** 2) / (4.0 * self.width**2)
            if self.idler_width is not None:
                expo = expo - (omega2 - self.idler_carrier) ** 2 / (4.0 * self.idler_width**2)
            return np.exp(expo).astype(complex)
        w1, w2, _ = self.table
        if (omega1.size and (omega1.min() < w1[0] or omega1.max() > w1[-1]
                             or omega2.min() < w2[0] or omega2.max() > w2[-1])):
            raise OutOfRangeError("phase matching queried outside its tabulated grid")
        points = np.stack([omega1.ravel(), omega2.ravel()], axis=-1)
        re, im = self._interp
        return (re(points) + 1j * im(points)).reshape(omega1.shape)


@dataclass(frozen=True)
class JointAmplitude:
    """``P(w1, w2) = pump(w1 + w2) * phasematch(w1, w2)``."""

    pump: object
    phasematch: PhaseMatching

    def __call__(self, omega1, omega2):
        omega1 = np.asarray(omega1, dtype=float)
        omega2 = np.asarray(omega2, dtype=float)
        return self.pump(omega1 + omega2) * self.phasematch(omega1, omega2)

    def on_grid(self, omega1, omega2):
        """Matrix ``P[i, j] = P(omega1[i], omega2[j])``."""
        return self(np.asarray(omega1)[:, None], np.asarray(omega2)[None, :])


def eval_joint(amplitude, omega1, omega2):
    """Joint spectral amplitude at a single point."""
    return complex(amplitude(omega1, omega2))


def coherence_time_from_filter(wavelength_nm, bandwidth_nm):
    """Coherence time (FWHM, fs) behind a Gaussian filter: ``0.44 lambda^2 / (c dlambda)``.

    Emits :class:`GaussianApproximationWarning` for relative bandwidths above 2 %,
    where real interference filters depart from a Gaussian transmission.
    """
    if not wavelength_nm > 0 or not bandwidth_nm > 0:
        raise DomainError("wavelength and bandwidth must be positive")
    if bandwidth_nm / wavelength_nm > _GAUSSIAN_FILTER_MAX_RELATIVE_BANDWIDTH:
        warnings.warn(
            f"gaussian approximation less accurate for a {bandwidth_nm} nm filter at "
            f"{wavelength_nm} nm; coherence time may be underestimated",
            GaussianApproximationWarning,
            stacklevel=2,
        )
    return TIME_BANDWIDTH_GAUSSIAN * wavelength_nm**2 / (C_NM_PER_FS * bandwidth_nm)


def filter_width_from_wavelength(wavelength_nm, bandwidth_nm):
    """Canonical filter width ``delta_f`` in rad/fs for an FWHM bandwidth in nm."""
    if not wavelength_nm > 0 or not bandwidth_nm > 0:
        raise DomainError("wavelength and bandwidth must be positive")
    fwhm_rad_per_fs = 2.0 * math.pi * C_NM_PER_FS * bandwidth_nm / wavelength_nm**2
    return fwhm_rad_per_fs / _FWHM_PER_SIGMA


@dataclass(frozen=True)
class OperatingPoint:
    ratio: float
    convention: str
    coherence_time_fs: float
    pump_duration_fs: float
    delta_p: float
    delta_f: float


def operating_point(pump_fwhm_fs, filter_fwhm_nm, wavelength_nm,
                    convention=RatioConvention.SIGMA_RATIO):
    """Coherence-time ratio ``r`` for a physical pump duration and filter.

    ``sigma-ratio`` returns ``delta_p / delta_f`` computed from the Gaussian
    widths (rad/fs); ``fwhm-ratio`` returns ``t_c / dt`` with the 0.44 rule.
    The two agree to 0.3 % because 0.44 approximates ``2 ln 2 / pi``.
    """
    convention = RatioConvention(convention)
    if not pump_fwhm_fs > 0:
        raise DomainError("pump duration must be positive")
    t_c = coherence_time_from_filter(wavelength_nm, filter_fwhm_nm)
    pump = make_gaussian_pump(duration=pump_fwhm_fs, convention=WidthConvention.INTENSITY_FWHM)
    delta_f = filter_width_from_wavelength(wavelength_nm, filter_fwhm_nm)
    if convention is RatioConvention.SIGMA_RATIO:
        ratio = pump.width / delta_f
    else:
        ratio = t_c / pump_fwhm_fs
    return OperatingPoint(ratio, convention.value, t_c, pump_fwhm_fs, pump.width, delta_f)


def rms_width(profile, grid, rule=Rule.GAUSS_LEGENDRE):
    """Root-mean-square width of ``profile`` treated as a density on ``grid``.

    ``profile`` is a nonnegative array-valued callable (a power spectrum or a
    filter transmission).
    """
    x, w = grid.nodes(rule)
    p = np.asarray(profile(x), dtype=float) * w
    total = p.sum()
    if not total > 0:
        raise DomainError("profile has no weight on the grid")
    mean = (p * x).sum() / total
    return math.sqrt((p * (x - mean) ** 2).sum() / total)
