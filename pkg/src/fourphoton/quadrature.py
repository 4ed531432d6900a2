"""One-dimensional quadrature rules on finite intervals."""

from enum import Enum

import numpy as np
from scipy.special import roots_legendre

from .errors import DomainError


class Rule(str, Enum):
    GAUSS_LEGENDRE = "gauss-legendre"
    TRAPEZOID = "trapezoid"


def nodes_and_weights(a, b, n, rule=Rule.GAUSS_LEGENDRE):
    """Nodes and weights of an ``n``-point rule on ``[a, b]``.

    Gauss-Legendre nodes are interior and symmetric about the midpoint;
    trapezoid nodes include both endpoints.
    """
    rule = Rule(rule)
    if n < 2:
        raise DomainError(f"need at least 2 quadrature points, got {n}")
    if not b > a:
        raise DomainError(f"empty interval [{a}, {b}]")
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    if rule is Rule.GAUSS_LEGENDRE:
        x, w = roots_legendre(n)
        return mid + half * x, half * w
    x = np.linspace(a, b, n)
    h = (b - a) / (n - 1)
    w = np.full(n, h)
    w[0] = w[-1] = 0.5 * h
    return x, w
