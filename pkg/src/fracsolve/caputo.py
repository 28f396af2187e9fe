"""L1 and modified-L1 discretizations of the Caputo derivative.

Both schemes approximate the Caputo derivative of order alpha in (0, 1) on a
uniform grid x_k = k h as

    y^(alpha)(x_n)  ~=  1 / (Gamma(2 - alpha) h^alpha) * sum_k c_k y_{n-k},

where the weight row c_0..c_n depends on the time level n: the final weight
couples the scheme to the initial value and differs from the interior
formula.  The modified scheme shifts the first three weights by multiples of
zeta(alpha - 1), which cancels the leading error term for smooth functions.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .specfun import zeta_unit_strip

__all__ = [
    "Scheme",
    "CoefficientRow",
    "l1_weights",
    "ml1_weights",
    "caputo_apply",
    "caputo_power_rule",
]


class Scheme(Enum):
    L1 = "l1"
    MODIFIED_L1 = "ml1"


@dataclass(frozen=True, eq=False)
class CoefficientRow:
    """Discretization weights c_0..c_n for one scheme at time level n.

    The row always sums to zero (the schemes annihilate constants), and for
    the plain L1 scheme c_0 = 1 with strictly negative trailing weights.
    """

    alpha: float
    n: int
    weights: np.ndarray

    def __post_init__(self):
        self.weights.setflags(write=False)


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")


def _interior_weights(alpha: float, kmax: int) -> np.ndarray:
    """Level-independent weights c_k = (k+1)^(1-a) - 2 k^(1-a) + (k-1)^(1-a)
    for k = 1..kmax.  Valid as long as k < n; the level's own index takes the
    tail formula instead."""
    k = np.arange(1, kmax + 1, dtype=float)
    e = 1.0 - alpha
    return (k + 1.0) ** e - 2.0 * k ** e + (k - 1.0) ** e


def _tail_weights(alpha: float, nmax: int) -> np.ndarray:
    """Final weight (n-1)^(1-a) - n^(1-a) for levels n = 1..nmax."""
    n = np.arange(1, nmax + 1, dtype=float)
    e = 1.0 - alpha
    return (n - 1.0) ** e - n ** e


def l1_weights(alpha: float, n: int) -> CoefficientRow:
    """Weight row of the L1 scheme at time level n >= 1."""
    _check_alpha(alpha)
    if n < 1:
        raise ValueError(f"l1_weights requires n >= 1, got {n}")
    w = np.empty(n + 1)
    w[0] = 1.0
    if n >= 2:
        w[1:n] = _interior_weights(alpha, n - 1)
    e = 1.0 - alpha
    w[n] = (n - 1.0) ** e - n ** e
    return CoefficientRow(alpha, n, w)


def ml1_weights(alpha: float, n: int) -> CoefficientRow:
    """Weight row of the modified L1 scheme at time level n >= 2.

    Identical to the L1 row except that indices 0, 1, 2 are shifted by
    -z, +2z, -z with z = zeta(alpha - 1); the shifts cancel, so the row
    still sums to zero.  At n = 2 the index-2 slot is the tail weight and
    receives the shift there.  Level 1 has no index 2 and falls back to L1.
    """
    _check_alpha(alpha)
    if n < 2:
        raise ValueError(f"ml1_weights requires n >= 2, got {n}")
    z = zeta_unit_strip(alpha - 1.0)
    w = np.array(l1_weights(alpha, n).weights)
    w[0] -= z
    w[1] += 2.0 * z
    w[2] -= z
    return CoefficientRow(alpha, n, w)


def caputo_apply(samples, alpha: float, h: float,
                 scheme: Scheme = Scheme.L1) -> float:
    """Apply a scheme to the samples y_0..y_n; returns the derivative at x_n."""
    y = np.asarray(samples, dtype=float)
    if y.ndim != 1:
        raise ValueError("samples must be a one-dimensional sequence")
    n = y.size - 1
    if h <= 0.0:
        raise ValueError(f"h must be positive, got {h}")
    if scheme is Scheme.MODIFIED_L1:
        if n < 2:
            raise ValueError("the modified L1 scheme needs at least samples y_0..y_2")
        row = ml1_weights(alpha, n)
    else:
        if n < 1:
            raise ValueError("need at least samples y_0..y_1")
        row = l1_weights(alpha, n)
    return float(row.weights @ y[::-1]) / (math.gamma(2.0 - alpha) * h ** alpha)


def caputo_power_rule(p: float, alpha: float, x: float) -> float:
    """Caputo derivative of x^p: Gamma(p+1)/Gamma(p+1-alpha) * x^(p-alpha).

    Requires p > 0; at x = 0 the derivative is 0 for p > alpha, finite for
    p = alpha and divergent for p < alpha.
    """
    if p <= 0.0:
        raise ValueError(f"caputo_power_rule requires p > 0, got {p}")
    _check_alpha(alpha)
    if x < 0.0:
        raise ValueError(f"caputo_power_rule requires x >= 0, got {x}")
    c = math.gamma(p + 1.0) / math.gamma(p + 1.0 - alpha)
    if x == 0.0:
        if p > alpha:
            return 0.0
        if p == alpha:
            return c
        return math.inf
    return c * x ** (p - alpha)
