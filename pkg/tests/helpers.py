import math

import numpy as np

from fourphoton import (
    FrequencyGrid,
    GaussianFilter,
    GaussianPump,
    JointAmplitude,
    MomentConfig,
    PhaseMatching,
)


def random_gaussian_case(rng, points=32, span=6.0):
    """Gaussian pump, filter and phase matching with randomized widths and centres.

    Returns ``(amplitude, filt, config, joint, transmission, signal, idler)``;
    the last four feed :func:`oracles.brute_force_moments`.
    """
    delta_p = rng.uniform(0.3, 3.0)
    delta_f = rng.uniform(0.3, 3.0)
    pm_width = rng.uniform(0.5, 4.0)
    s_center = rng.uniform(-5.0, 5.0)
    s_half = span * delta_f
    i_half = span * math.hypot(delta_f, delta_p)
    i_center = s_center + 2.5 * (s_half + i_half)
    pump = GaussianPump(s_center + i_center + rng.uniform(-0.5, 0.5), delta_p,
                        normalization=rng.uniform(0.5, 2.0), phase=rng.uniform(0, 2 * np.pi))
    pm = PhaseMatching.gaussian(s_center + rng.uniform(-0.3, 0.3), i_center, pm_width)
    amplitude = JointAmplitude(pump, pm)
    filt = GaussianFilter(s_center + rng.uniform(-0.3, 0.3), delta_f, peak=rng.uniform(0.5, 1.0))
    # resolution is fixed for the comparison, so the doubling check is not the point here
    config = MomentConfig(FrequencyGrid(s_center, s_half, points),
                          FrequencyGrid(i_center, i_half, points), tolerance=1.0)
    signal = (s_center - s_half, s_center + s_half)
    idler = (i_center - i_half, i_center + i_half)
    return amplitude, filt, config, amplitude, filt.intensity, signal, idler


class Separable:
    """``P(w1, w2) = u(w1) v(w2)``."""

    def __init__(self, u, v):
        self.u, self.v = u, v

    def on_grid(self, x, y):
        return np.outer(self.u(x), self.v(y)).astype(complex)
