"""Photon-number statistics of N independent two-mode squeezed vacua.

Each process emits ``sum_n (T^n / C) |n; n>`` with ``T = tanh(xi)`` and
``C = cosh(xi)``. Nothing here sets ``C = 1``: the vacuum factors are kept so
that the finite-gain excess of chi over ``1/N`` is visible.
"""

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.stats import poisson

from .errors import DegenerateInputError, DomainError, TruncationError

DEFAULT_MAX_PAIRS = 6
DEFAULT_TAIL_TOLERANCE = 1e-6


@dataclass(frozen=True)
class SqueezedProcess:
    xi: float
    max_pairs: int = DEFAULT_MAX_PAIRS

    def __post_init__(self):
        if not self.xi >= 0 or not math.isfinite(self.xi):
            raise DomainError(f"squeezing parameter must be finite and >= 0, got {self.xi}")
        if self.max_pairs < 2:
            raise DomainError("keep at least two pairs per process")

    @property
    def t(self):
        return math.tanh(self.xi)

    @property
    def c(self):
        return math.cosh(self.xi)

    def amplitudes(self):
        """Amplitudes of ``|n; n>`` for ``n = 0 .. max_pairs``."""
        n = np.arange(self.max_pairs + 1)
        return self.t**n / self.c

    def pair_distribution(self):
        return self.amplitudes() ** 2

    @property
    def tail_bound(self):
        """Upper bound on the probability dropped beyond ``max_pairs``."""
        t2 = self.t**2
        return t2 ** (self.max_pairs + 1) / (1.0 - t2)


def _convolve_power(dist, n):
    # binary powering keeps the number of convolutions logarithmic in n
    result = np.array([1.0])
    base = dist
    while n:
        if n & 1:
            result = np.convolve(result, base)
        n >>= 1
        if n:
            base = np.convolve(base, base)
    return result


@dataclass(frozen=True, eq=False)
class MultiProcessState:
    """``N`` identical processes; ``probabilities[n]`` is the chance of ``n`` pairs in total.

    Entries up to ``max_pairs`` are exact. Higher entries leave out the terms
    in which some process emits more than ``max_pairs`` pairs; the total
    omitted mass is at most :attr:`tail_bound`.
    """

    n_processes: int
    process: SqueezedProcess
    tail_tolerance: float = DEFAULT_TAIL_TOLERANCE
    probabilities: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if int(self.n_processes) != self.n_processes or self.n_processes < 1:
            raise DomainError(f"N must be a positive integer, got {self.n_processes}")
        table = _convolve_power(self.process.pair_distribution(), self.n_processes)
        table.setflags(write=False)
        object.__setattr__(self, "probabilities", table)

    @classmethod
    def build(cls, n_processes, xi, max_pairs=DEFAULT_MAX_PAIRS,
              tail_tolerance=DEFAULT_TAIL_TOLERANCE):
        return cls(n_processes, SqueezedProcess(xi, max_pairs), tail_tolerance)

    @property
    def xi(self):
        return self.process.xi

    @property
    def tail_bound(self):
        return self.n_processes * self.process.tail_bound

    def sector_weights(self):
        """Four-photon sector split, see :func:`four_photon_decomposition`."""
        return four_photon_decomposition(self.n_processes)

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n_pairs", "probability"])
        for n, p in enumerate(self.probabilities):
            writer.writerow([n, repr(float(p))])
        return buf.getvalue()

    def summary(self):
        return {"N": self.n_processes, "xi": self.xi, "chi": chi_from_fock(self),
                "tail_bound": self.tail_bound}

    def to_json(self, **kwargs):
        return json.dumps(self.summary(), **kwargs)


def _pair_patterns(n_processes, n_pairs):
    # multisets of process labels: which process emitted each of the pairs
    return itertools.combinations_with_replacement(range(n_processes), n_pairs)


def sector_norms(n_processes):
    """Norms of the unnormalized 2- and 4-photon components, by enumeration."""
    if n_processes < 1:
        raise DomainError("N must be >= 1")
    norm2 = sum(1 for _ in _pair_patterns(n_processes, 1))
    norm4 = sum(1 for _ in _pair_patterns(n_processes, 2))
    return norm2, norm4


def probabilities(state):
    """Total-pair-number distribution, checked against the truncation tolerance."""
    if state.tail_bound > state.tail_tolerance:
        raise TruncationError(
            f"truncation at {state.process.max_pairs} pairs per process leaves up to "
            f"{state.tail_bound:.2e} probability out (tolerance {state.tail_tolerance:.1e})",
            state.tail_bound,
        )
    return state.probabilities


def chi_from_fock(state):
    """``2 P4 / P2^2 - 1`` from the exact table.

    For small xi this tends to ``1/N``; at finite gain it equals
    ``C^(2N) (N + 1) / N - 1``.
    """
    probabilities(state)
    t2 = state.process.t ** 2
    if not t2 > 0:
        raise DegenerateInputError("no pair emission (P2 = 0): chi is undefined")
    # the same table with P_n divided by T^(2n), where each process weighs 1/C^2 per
    # pair number; P2^2 underflows long before T^2 does
    scaled = _convolve_power(np.full(3, state.process.c ** -2), state.n_processes)
    return 2.0 * scaled[2] / scaled[1] ** 2 - 1.0


@dataclass(frozen=True)
class FourPhotonDecomposition:
    weight_entangled: float
    weight_two_pairs: float
    chi_equivalent: float
    entangled_patterns: int
    two_pair_patterns: int

    def as_fractions(self):
        total = self.entangled_patterns + self.two_pair_patterns
        return (Fraction(self.entangled_patterns, total),
                Fraction(self.two_pair_patterns, total))


def four_photon_decomposition(n_processes):
    """Weights of the stimulated and two-independent-pair parts of the 4-photon sector.

    Patterns with both pairs from the same process carry the stimulated
    correlations; patterns with pairs from distinct processes behave as two
    independent pairs. All patterns have equal amplitude.
    """
    if n_processes < 1:
        raise DomainError("N must be >= 1")
    same = distinct = 0
    for a, b in _pair_patterns(n_processes, 2):
        if a == b:
            same += 1
        else:
            distinct += 1
    w_ent = Fraction(same, same + distinct)
    chi = w_ent / (2 - w_ent)
    return FourPhotonDecomposition(float(w_ent), float(1 - w_ent), float(chi), same, distinct)


def poisson_limit_check(n_processes, mean_pairs, max_pairs=DEFAULT_MAX_PAIRS):
    """Total-variation distance between the N-process table and Poisson(mean_pairs).

    Each process gets ``T^2 = mean_pairs / N``. Both distributions are compared
    on the support of the truncated table, with the leftover mass of each
    lumped into one overflow cell.
    """
    if n_processes < 10:
        raise DomainError("the Poisson comparison needs N >= 10")
    if not mean_pairs >= 0:
        raise DomainError("mean number of pairs must be nonnegative")
    t2 = mean_pairs / n_processes
    if not t2 < 1:
        raise DomainError(f"T^2 = mu/N = {t2} has no squeezing parameter (needs < 1)")
    xi = math.atanh(math.sqrt(t2))
    table = MultiProcessState.build(n_processes, xi, max_pairs, tail_tolerance=math.inf)
    p = table.probabilities
    q = poisson.pmf(np.arange(p.size), mean_pairs)
    overflow = abs((1.0 - p.sum()) - (1.0 - q.sum()))
    return 0.5 * (np.abs(p - q).sum() + overflow)
