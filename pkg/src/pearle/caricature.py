"""Two-dimensional caricature of the detection regions.

Points sit in the unit disk at angle ``theta`` (uniform) and radius ``R``
with the model's amplitude law. Measuring along the positive x-axis, a
point is detected iff its angular deviation from the nearer of the 0 / pi
axes is below ``R pi/2``; detected points report up on the right half-plane
and down on the left.

Draw order for ``n`` points: ``n`` uniforms for theta, then ``n`` for V.
"""

from __future__ import annotations

import math

import numpy as np

from .model import Outcome, threshold_from_uniform, threshold_to_amplitude

TWO_PI = 2.0 * math.pi
HALF_PI = math.pi / 2


def axis_deviation(theta):
    """Angle between direction ``theta`` in [0, 2 pi) and the nearer of the 0 / pi axes."""
    t = np.asarray(theta, dtype=np.float64)
    return np.where(t < HALF_PI, t, np.where(t > 3 * HALF_PI, TWO_PI - t, np.abs(t - math.pi)))


def classify(theta, r):
    """Outcome codes (+1 up, -1 down, 0 undetected) for points at ``(theta, r)``."""
    t = np.asarray(theta, dtype=np.float64)
    right = (t < HALF_PI) | (t > 3 * HALF_PI)
    seen = axis_deviation(t) < np.asarray(r) * HALF_PI
    codes = np.where(right, int(Outcome.UP), int(Outcome.DOWN))
    return np.where(seen, codes, int(Outcome.NO_DETECTION))


def sample_points(rng: np.random.Generator, n: int):
    """Return ``(x, y, codes)`` for ``n`` caricature points."""
    if n < 1:
        raise ValueError("need at least one point")
    theta = TWO_PI * rng.random(n)
    r = threshold_to_amplitude(threshold_from_uniform(1.0 + 3.0 * rng.random(n)))
    return r * np.cos(theta), r * np.sin(theta), classify(theta, r)


def boundary_curves(n_r: int = 1001, n_t: int = 1000) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Mushroom outlines ``(+-r cos(r pi/2), +-r sin(r pi/2))`` and the two unit half-circles."""
    r = np.linspace(0.0, 1.0, n_r)
    c, s = r * np.cos(r * HALF_PI), r * np.sin(r * HALF_PI)
    t = np.linspace(0.0, math.pi, n_t)
    return {
        "up_upper": (c, s),
        "up_lower": (c, -s),
        "down_upper": (-c, s),
        "down_lower": (-c, -s),
        "circle_right": (np.sin(t), np.cos(t)),
        "circle_left": (-np.sin(t), np.cos(t)),
    }


def undetected_fraction_exact() -> float:
    """``1 - E[R]``: theta's axis deviation is uniform on [0, pi/2], so P(seen) = E[R]."""
    from scipy import integrate

    from .density import r_density

    mean_r, _ = integrate.quad(lambda r: r * r_density(r), 0.0, 1.0, epsabs=1e-13)
    return 1.0 - mean_r
