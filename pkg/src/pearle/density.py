"""Closed-form laws of the amplitude R and threshold S = cos(R pi/2).

All functions accept scalars or arrays and return the same kind.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, stats

HALF_PI = math.pi / 2
R_DENSITY_AT_ONE = 4.0 * math.pi / 3.0
PEARLE_RATIO = 4.0 / math.pi  # pearle_combined_density / r_density


def _unit_interval(x, name):
    arr = np.asarray(x, dtype=np.float64)
    if np.any(np.isnan(arr)) or np.any((arr < 0.0) | (arr > 1.0)):
        raise ValueError(f"{name} must lie in [0, 1]")
    return arr


def _out(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def r_density(r):
    """f_R(r) = (4 pi / 3) sin(r pi/2) / (1 + cos(r pi/2))^3."""
    r = _unit_interval(r, "r")
    return _out(R_DENSITY_AT_ONE * np.sin(r * HALF_PI) / (1.0 + np.cos(r * HALF_PI)) ** 3)


def r_cdf(r):
    """Pr(R <= r) = (4 / (1 + cos(r pi/2))^2 - 1) / 3."""
    r = _unit_interval(r, "r")
    return _out((4.0 / (1.0 + np.cos(r * HALF_PI)) ** 2 - 1.0) / 3.0)


def s_density(s):
    """(8/3) (1 + s)^-3, the law of 2/sqrt(V) - 1 with V ~ Unif(1, 4)."""
    s = _unit_interval(s, "s")
    return _out((8.0 / 3.0) / (1.0 + s) ** 3)


def s_cdf(s):
    """Pr(S <= s) = Pr(V >= 4/(1+s)^2) = (4 - 4/(1+s)^2) / 3."""
    s = _unit_interval(s, "s")
    return _out((4.0 - 4.0 / (1.0 + s) ** 2) / 3.0)


def uniform_ball_density(r):
    """Radial density 3 r^2 of a point uniform in the unit ball."""
    return _out(3.0 * np.asarray(r, dtype=np.float64) ** 2)


def pearle_combined_density(r):
    """Pearle's original density, (16/3) sin(r pi/2) / (1 + cos(r pi/2))^3.

    Off by the constant factor 4/pi, so it integrates to 4/pi rather than 1.
    """
    r = _unit_interval(r, "r")
    return _out((16.0 / 3.0) * np.sin(r * HALF_PI) / (1.0 + np.cos(r * HALF_PI)) ** 3)


def pearle_combined_integral() -> float:
    value, _ = integrate.quad(pearle_combined_density, 0.0, 1.0, epsabs=1e-13, epsrel=1e-13)
    return value


def riemann_bounds(n_intervals: int) -> tuple[float, float]:
    """Guaranteed bracket of the integral of f_R over [0, 1].

    f_R is increasing, so the left sum is a lower bound and the right sum an
    upper bound. Sums are compensated (``math.fsum``).
    """
    n = int(n_intervals)
    if n < 1:
        raise ValueError("n_intervals must be >= 1")
    f = r_density(np.linspace(0.0, 1.0, n + 1))
    lower = math.fsum(f[:-1]) / n
    upper = math.fsum(f[1:]) / n
    return lower, upper


@dataclass(frozen=True)
class DensityCurve:
    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.grid.shape != self.values.shape:
            raise ValueError("grid and values differ in length")
        if np.any(self.values < 0):
            raise ValueError("density values must be nonnegative")


def density_curves(n_intervals: int) -> dict[str, DensityCurve]:
    """f_R, 3r^2 and Pearle's formula on the ``n_intervals + 1`` point grid."""
    if int(n_intervals) < 1:
        raise ValueError("n_intervals must be >= 1")
    r = np.linspace(0.0, 1.0, int(n_intervals) + 1)
    return {
        "f_R": DensityCurve(r, r_density(r)),
        "f_uniform_ball": DensityCurve(r, uniform_ball_density(r)),
        "f_pearle_combined": DensityCurve(r, pearle_combined_density(r)),
    }


# -- goodness of fit ----------------------------------------------------------


def ks_statistic(samples, cdf: Callable) -> float:
    """Kolmogorov-Smirnov distance sup |F_n - F| for a continuous ``cdf``."""
    x = np.sort(np.asarray(samples, dtype=np.float64))
    n = x.size
    if n == 0:
        raise ValueError("need at least one sample")
    f = np.asarray(cdf(x), dtype=np.float64)
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - f)
    d_minus = np.max(f - (i - 1) / n)
    return float(max(d_plus, d_minus))


def ks_critical_value(n: int, alpha: float = 0.01) -> float:
    """Exact one-sample two-sided critical value: reject when D > value."""
    return float(stats.kstwo.isf(alpha, n))


def ks_passes(samples, cdf: Callable, alpha: float = 0.01) -> bool:
    x = np.asarray(samples)
    return ks_statistic(x, cdf) <= ks_critical_value(x.size, alpha)
