"""Monte Carlo of the pulse-train coincidence experiment.

Each pump pulse emits zero, one or two pairs. Mode-a photons go through a
50-50 coupler to detectors D+ (START) and D- (STOP); a detector fires at most
once per photon-carrying pulse (no photon-number resolution). Dark clicks
arrive uniformly in time and only add a flat background. Every D-/D+ click
pair within two pulse periods is histogrammed, as with a multi-stop time
tagger, so the peaks at 0 and +-period carry the same-pulse and
consecutive-pulse coincidences.
"""

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .._parallel import ordered_map
from ..errors import DomainError, EmptyRunError, HighGainWarning

# periods on either side of START that can still produce a STOP
_MAX_OFFSET = 2
_HIGH_GAIN_P2 = 0.3


@dataclass(frozen=True)
class ExperimentConfig:
    """Pulse-train experiment; times in ns, probabilities per pulse."""

    p2: float
    chi: float
    pulses: int
    seed: int = 0
    period_ns: float = 13.0
    eta: float = 1.0
    dark: float = 0.0
    bin_ns: float = 0.1
    peak_halfwidth_ns: float = 1.0
    batches: int = 20

    def __post_init__(self):
        if not 0.0 <= self.p2 <= 1.0:
            raise DomainError(f"P2 must be a probability, got {self.p2}")
        if not 0.0 <= self.chi <= 1.0:
            raise DomainError(f"chi must lie in [0, 1], got {self.chi}")
        if self.p2 + self.p4 > 1.0:
            raise DomainError(f"P2 + P4 = {self.p2 + self.p4:.4f} exceeds 1")
        if int(self.pulses) != self.pulses or self.pulses < 0:
            raise DomainError("pulses must be a nonnegative integer")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must fit in 64 unsigned bits")
        if not 0.0 < self.eta <= 1.0:
            raise DomainError(f"detector efficiency must lie in (0, 1], got {self.eta}")
        if not 0.0 <= self.dark < 1.0:
            raise DomainError(f"dark-count probability must lie in [0, 1), got {self.dark}")
        if not self.bin_ns > 0 or self.period_ns < 10 * self.bin_ns:
            raise DomainError("the pulse period must span at least 10 TAC bins")
        if not self.bin_ns / 2 < self.peak_halfwidth_ns < self.period_ns / 4:
            raise DomainError("peak half-width must exceed half a bin and stay below period/4")
        if self.batches < 1:
            raise DomainError("batches must be >= 1")
        if self.p2 > _HIGH_GAIN_P2:
            warnings.warn(f"P2 = {self.p2} is large; events with three or more pairs are "
                          "neglected", HighGainWarning, stacklevel=2)

    @property
    def p4(self):
        return 0.5 * self.p2**2 * (1.0 + self.chi)

    def edges(self):
        half = int(math.floor(1.5 * self.period_ns / self.bin_ns))
        return (np.arange(-half, half + 2) - 0.5) * self.bin_ns


@dataclass(frozen=True, eq=False)
class PeakSummary:
    delay_ns: float
    gross: int
    net: float


@dataclass(frozen=True, eq=False)
class TacHistogram:
    """START-STOP delay histogram, kept per batch for error estimation."""

    edges: np.ndarray
    batch_counts: np.ndarray
    batch_pulses: np.ndarray
    batch_singles: np.ndarray
    period_ns: float
    peak_halfwidth_ns: float
    counts: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "counts", self.batch_counts.sum(axis=0))

    @property
    def centers(self):
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    @property
    def pulses(self):
        return int(self.batch_pulses.sum())

    @property
    def total(self):
        return int(self.counts.sum())

    def _window(self, order):
        return np.abs(self.centers - order * self.period_ns) <= self.peak_halfwidth_ns

    def background_mask(self):
        far = np.ones(self.centers.shape, dtype=bool)
        for order in (-1, 0, 1):
            far &= np.abs(self.centers - order * self.period_ns) > 2 * self.peak_halfwidth_ns
        return far

    def background_per_bin(self, counts=None):
        counts = self.counts if counts is None else counts
        return float(counts[self.background_mask()].mean())

    def peak(self, order, counts=None):
        """Gross and background-subtracted area of the peak at ``order * period``."""
        counts = self.counts if counts is None else counts
        window = self._window(order)
        gross = int(counts[window].sum())
        net = gross - self.background_per_bin(counts) * int(window.sum())
        return PeakSummary(order * self.period_ns, gross, net)

    @property
    def peaks(self):
        return {order: self.peak(order) for order in (-1, 0, 1)}

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["delay_ns", "counts"])
        for center, count in zip(self.centers, self.counts):
            writer.writerow([f"{center:.6f}", int(count)])
        return buf.getvalue()


def _offset_slices(n, k):
    if k >= 0:
        return slice(0, n - k), slice(k, n)
    return slice(-k, n), slice(0, n + k)


def _simulate_batch(config, index, n):
    rng = np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(index,)))
    u = rng.random(n)
    pairs = np.where(u < config.p2, 1, np.where(u < config.p2 + config.p4, 2, 0))
    v = rng.random((n, 2))
    present = np.arange(2)[None, :] < pairs[:, None]
    half = 0.5 * config.eta
    plus = (present & (v < half)).any(axis=1)
    minus = (present & (v >= half) & (v < config.eta)).any(axis=1)
    period = config.period_ns
    dark_plus = rng.random(n) < config.dark
    dark_minus = rng.random(n) < config.dark
    dark_plus_t = rng.uniform(-0.5 * period, 0.5 * period, n)
    dark_minus_t = rng.uniform(-0.5 * period, 0.5 * period, n)

    starts = ((plus, None), (dark_plus, dark_plus_t))
    stops = ((minus, None), (dark_minus, dark_minus_t))
    delays = []
    for k in range(-_MAX_OFFSET, _MAX_OFFSET + 1):
        a, b = _offset_slices(n, k)
        for start_mask, start_t in starts:
            for stop_mask, stop_t in stops:
                hit = start_mask[a] & stop_mask[b]
                d = np.full(int(hit.sum()), k * period)
                if stop_t is not None:
                    d += stop_t[b][hit]
                if start_t is not None:
                    d -= start_t[a][hit]
                delays.append(d)
    counts, _ = np.histogram(np.concatenate(delays), bins=config.edges())
    singles = (int(plus.sum() + dark_plus.sum()), int(minus.sum() + dark_minus.sum()))
    return counts, singles


def simulate_pulse_train(config):
    """Run the experiment and return the TAC histogram.

    Pulses are split into ``config.batches`` batches, each with its own
    stream derived from ``(seed, batch index)``; results do not depend on
    the number of worker threads.
    """
    if config.pulses == 0:
        raise EmptyRunError("no pulses to simulate")
    n_batches = max(1, min(config.batches, config.pulses // 2))
    sizes = np.full(n_batches, config.pulses // n_batches)
    sizes[: config.pulses % n_batches] += 1
    results = ordered_map(lambda item: _simulate_batch(config, *item), enumerate(sizes.tolist()))
    return TacHistogram(
        edges=config.edges(),
        batch_counts=np.array([r[0] for r in results]),
        batch_pulses=sizes,
        batch_singles=np.array([r[1] for r in results]),
        period_ns=config.period_ns,
        peak_halfwidth_ns=config.peak_halfwidth_ns,
    )


@dataclass(frozen=True)
class RunSummary:
    r0: float
    rside_plus: float
    rside_minus: float
    ratio: float
    ratio_stderr: float
    ratio_raw: float
    seed: int
    pulses: int

    def to_json(self, **kwargs):
        return json.dumps(self.__dict__, **kwargs)


def _ratios(hist, counts, pulses, pairs, singles, eta, dark):
    r0 = hist.peak(0, counts).net
    side = hist.peak(1, counts).net
    if not side > 0 or not r0 > 0:
        return math.nan, math.nan
    central = r0 / pulses
    raw = central / (side / pairs)
    # singles with dark clicks removed, then stripped of two-pair contributions
    s_plus, s_minus = singles / pulses - dark
    k = 2.0 / eta - 0.5
    one_plus, one_minus = s_plus - k * central, s_minus - k * central
    if not (one_plus > 0 and one_minus > 0):
        return raw, math.nan
    return raw, raw * (s_plus * s_minus) / (one_plus * one_minus)


def estimate_ratio(hist, config):
    """Central-to-side peak ratio, an estimator of ``1 + chi``.

    ``ratio_raw`` is the plain ratio of background-subtracted peak areas. At
    finite P2 the side peak also collects pulses with two pairs, so ``ratio``
    rescales the side peak by the fraction of singles that come from
    one-pair pulses; the two-pair share follows from the central peak and the
    detector efficiency. The standard error is a jackknife over batches.
    """
    pulses = hist.batch_pulses
    pairs = pulses - 1
    counts = hist.batch_counts
    singles = hist.batch_singles.astype(float)
    total = (counts.sum(0), pulses.sum(), pairs.sum(), singles.sum(0))
    raw, ratio = _ratios(hist, *total, config.eta, config.dark)
    n = counts.shape[0]
    stderr = math.nan
    if n > 1:
        leave_out = np.array([
            _ratios(hist, total[0] - counts[i], total[1] - pulses[i], total[2] - pairs[i],
                    total[3] - singles[i], config.eta, config.dark)[1]
            for i in range(n)
        ])
        if np.all(np.isfinite(leave_out)):
            stderr = float(np.sqrt((n - 1) / n * ((leave_out - leave_out.mean()) ** 2).sum()))
    return RunSummary(
        r0=hist.peak(0).net,
        rside_plus=hist.peak(1).net,
        rside_minus=hist.peak(-1).net,
        ratio=ratio,
        ratio_stderr=stderr,
        ratio_raw=raw,
        seed=config.seed,
        pulses=hist.pulses,
    )
