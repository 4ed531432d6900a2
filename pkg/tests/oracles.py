"""Reference computations that share no code with the library.

Each one takes the long way round: a dense 4-D sum instead of the kernel
reduction, hand-integrated Gaussians, the negative binomial instead of
repeated convolution, root finding on a sampled temporal profile.
"""

import math

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import brentq
from scipy.special import erf

C_M_PER_S = 2.99792458e8


def gauss_nodes(lo, hi, n):
    x, w = leggauss(n)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def brute_force_moments(joint, transmission, signal, idler, n):
    """J2F and J4F as direct sums over all four frequencies.

    ``joint(w1, w2)`` broadcasts, ``transmission(w1)`` is the filter intensity
    and ``signal``/``idler`` are ``(lo, hi)`` windows.
    """
    x, wx = gauss_nodes(*signal, n)
    y, wy = gauss_nodes(*idler, n)
    f = transmission(x) * wx
    p = joint(x[:, None], y[None, :])
    j2f = np.einsum("i,j,ij->", f, wy, np.abs(p) ** 2).real
    # P(1,2) P(1',2') P*(1,2') P*(1',2), indices (a, b, c, d) = (w1, w1', w2, w2')
    big = (p[:, None, :, None] * p[None, :, None, :]
           * p.conj()[:, None, None, :] * p.conj()[None, :, :, None])
    j4f = np.einsum("a,b,c,d,abcd->", f, f, wy, wy, big).real
    return float(j2f), float(j4f)


def gaussian_kernel_unfiltered(y, yp, carrier, width, lo, hi):
    """``M(y, y') = int_lo^hi g(x + y) g(x + y') dx`` for a real Gaussian pump.

    With ``g(w) = (2 pi d^2)^(-1/4) exp(-(w - c)^2 / (4 d^2))`` the exponent is
    ``-(s^2 / (2 d^2)) - (y - y')^2 / (8 d^2)`` with ``s = x + (y + y')/2 - c``.
    """
    d = width
    mid = 0.5 * (y + yp) - carrier
    a = (lo + mid) / (math.sqrt(2.0) * d)
    b = (hi + mid) / (math.sqrt(2.0) * d)
    integral = d * math.sqrt(math.pi / 2.0) * (erf(b) - erf(a))
    return (2.0 * math.pi * d * d) ** -0.5 * np.exp(-((y - yp) ** 2) / (8.0 * d * d)) * integral


def fock_pair_distribution(n_processes, xi, n_max):
    """Total pairs from N geometric emitters: the negative binomial mass function.

    Written as ``binom(N + n - 1, n) T^(2n) / C^(2N)``; going through
    ``1 - 1/C^2`` would cancel catastrophically at small xi.
    """
    t2 = math.tanh(xi) ** 2
    c2n = math.cosh(xi) ** (-2 * n_processes)
    return np.array([math.comb(n_processes + n - 1, n) * t2**n * c2n for n in range(n_max + 1)])


def temporal_fwhm(spectral_amplitude, lo, hi, guess, n=401):
    """Intensity FWHM of ``|int a(w) exp(-i w t) dw|^2`` by root finding."""
    w, dw = gauss_nodes(lo, hi, n)
    amp = spectral_amplitude(w) * dw

    def intensity(t):
        return abs(np.sum(amp * np.exp(-1j * w * t))) ** 2

    peak = intensity(0.0)
    half = brentq(lambda t: intensity(t) - 0.5 * peak, 0.0, 10.0 * guess)
    return 2.0 * half


def coherence_time_fs(wavelength_nm, bandwidth_nm):
    """``0.44 lambda^2 / (c dlambda)`` evaluated in SI units, then converted to fs."""
    lam = wavelength_nm * 1e-9
    dlam = bandwidth_nm * 1e-9
    return 0.44 * lam**2 / (C_M_PER_S * dlam) * 1e15


def filter_temporal_fwhm_fs(wavelength_nm, bandwidth_nm):
    """Temporal intensity FWHM of light behind a Gaussian filter of FWHM ``dlambda``."""
    nu_fwhm = C_M_PER_S * 1e-15 * (bandwidth_nm * 1e-9) / (wavelength_nm * 1e-9) ** 2  # 1/fs
    omega_fwhm = 2.0 * math.pi * nu_fwhm
    sigma = omega_fwhm / (2.0 * math.sqrt(2.0 * math.log(2.0)))  # of the intensity transmission

    def amplitude(w):
        return np.exp(-(w**2) / (4.0 * sigma**2))

    return temporal_fwhm(amplitude, -12 * sigma, 12 * sigma, 1.0 / sigma)
