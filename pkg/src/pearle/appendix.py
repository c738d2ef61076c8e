"""Grid evaluation of the operator taking mu to a candidate density h of S.

    h(x) = d^2/dx^2 ( x^2/(1-x^2) [ I1 - I2(x) ] )
    I1    = int_0^1 sqrt(1 - z^2) mu(z) dz
    I2(x) = int_0^x sqrt(1 - z^2/x^2) mu(z) dz

``I2`` is evaluated for every grid point at once by masking the kernel to
zero for ``z > x``; columns are summed one at a time so memory stays O(n).

Two quadrature rules are offered. ``"mean"`` is the plain average over all
grid points. ``"corrected"`` (default) is the trapezoid rule plus the
leading generalized Euler-Maclaurin term for the square-root zero of the
integrand at the upper limit, ``-zeta(-1/2) * g * h^{3/2}`` where the
integrand behaves like ``g * sqrt(limit - z)``. The mean rule carries an
O(1/n) bias; the corrected rule is accurate to ~1e-4 relative at n = 200.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from . import kernels

DEFAULT_N = 10_000
DEFAULT_EPS = 1e-9
SYMMETRY_TOL = 1e-6
# zeta(-1/2)
_ZETA_MINUS_HALF = -0.20788622497735456
RULES = ("corrected", "mean")


@dataclass(frozen=True)
class Grid:
    n: int = DEFAULT_N
    eps: float = DEFAULT_EPS

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("grid needs at least two points")
        if not 0.0 <= self.eps < 0.5:
            raise ValueError("eps must lie in [0, 0.5)")

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.eps, 1.0 - self.eps, self.n)

    @property
    def spacing(self) -> float:
        return (1.0 - 2.0 * self.eps) / (self.n - 1)

    def default_trim(self) -> int:
        return self.n // 100


@dataclass(frozen=True, eq=False)
class GridFunction:
    grid: Grid
    values: np.ndarray
    # number of leading grid points the values cover (derivatives shorten it)
    length: int | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", values)
        if self.length is None:
            object.__setattr__(self, "length", self.grid.n)
        if values.shape != (self.length,):
            raise ValueError(f"expected {self.length} values, got shape {values.shape}")

    @property
    def x(self) -> np.ndarray:
        return self.grid.points[: self.length]

    @classmethod
    def from_callable(cls, grid: Grid, fn) -> "GridFunction":
        return cls(grid, np.broadcast_to(fn(grid.points), (grid.n,)).copy())

    def scaled(self, factor: float) -> "GridFunction":
        return GridFunction(self.grid, self.values * factor, self.length)


class MuSpec(enum.Enum):
    CONSTANT = "constant"
    G_CONSTANT = "g-constant"


MuLike = Union[MuSpec, str, GridFunction]


def check_mu_symmetry(mu: GridFunction, tol: float = SYMMETRY_TOL) -> bool:
    """Whether ``mu(x) == mu(sqrt(1 - x^2))`` holds on the grid to within ``tol``.

    The map is an involution swapping [0, 1/sqrt2] and [1/sqrt2, 1], so it
    is enough to check grid points ``x >= 1/sqrt2`` against ``mu`` linearly
    interpolated at ``sqrt(1 - x^2)``. This keeps interpolation away from
    the right endpoint where admissible ``mu`` may have a square-root cusp.
    """
    x = mu.x
    vals = mu.values
    upper = x >= 1.0 / math.sqrt(2.0)
    mirror = np.sqrt(1.0 - x[upper] ** 2)
    return bool(np.all(np.abs(vals[upper] - np.interp(mirror, x, vals)) <= tol))


def mu_constant(grid: Grid, c: float = 1.0) -> GridFunction:
    return GridFunction(grid, np.full(grid.n, float(c)))


def mu_from_g_constant(c: float = 1.0, grid: Grid | None = None) -> GridFunction:
    """mu for a constant pair-detection probability g = c: ``2c x sqrt(1 - x^2)``."""
    if c <= 0:
        raise ValueError("c must be positive")
    grid = grid or Grid()
    x = grid.points
    return GridFunction(grid, 2.0 * c * x * np.sqrt(1.0 - x * x))


def resolve_mu(mu: MuLike, grid: Grid) -> GridFunction:
    if isinstance(mu, GridFunction):
        if mu.grid != grid or mu.length != grid.n:
            raise ValueError("custom mu must be sampled on the full evaluation grid")
        if not check_mu_symmetry(mu):
            raise ValueError("custom mu violates mu(x) = mu(sqrt(1 - x^2))")
        return mu
    spec = MuSpec(mu)
    if spec is MuSpec.CONSTANT:
        return mu_constant(grid)
    return mu_from_g_constant(1.0, grid)


def _sqrt_endpoint_correction(g, h):
    return -_ZETA_MINUS_HALF * g * h**1.5


def bracket_integrals(mu: GridFunction, rule: str = "corrected", backend=None):
    """Return ``(I1, I2)``: the scalar full integral and the per-point masked integral."""
    if rule not in RULES:
        raise ValueError(f"unknown rule {rule!r}; expected one of {RULES}")
    grid = mu.grid
    z = grid.points
    m = mu.values
    n = grid.n
    f = np.sqrt(1.0 - z * z) * m
    raw = kernels.masked_kernel_sums(z, m, backend)
    if rule == "mean":
        return float(np.mean(f)), raw / n

    h = grid.spacing
    # near z = 1: sqrt(1 - z^2) ~ sqrt(2) sqrt(1 - z)
    first = h * (math.fsum(f) - 0.5 * (f[0] + f[-1]))
    first += _sqrt_endpoint_correction(math.sqrt(2.0) * m[-1], h)
    # column j: trapezoid over z_0..z_j; the z_j term is sqrt(0) * mu = 0
    r0 = z[0] / z
    k0 = np.sqrt(1.0 - r0 * r0) * m[0]
    second = h * (raw - 0.5 * k0)
    # near z = x: sqrt(1 - z^2/x^2) ~ sqrt(2/x) sqrt(x - z)
    second += _sqrt_endpoint_correction(np.sqrt(2.0 / z) * m, h)
    second[0] = 0.0
    return first, second


def inner_bracket(mu: GridFunction, rule: str = "corrected", backend=None) -> GridFunction:
    """``x^2 (I1 - I2(x)) / (1 - x^2)`` on the grid."""
    first, second = bracket_integrals(mu, rule, backend)
    x = mu.grid.points
    return GridFunction(mu.grid, x * x * (first - second) / (1.0 - x * x))


def second_derivative(f: GridFunction, trim: int | None = None) -> GridFunction:
    """Forward second difference ``(f[i+2] - 2 f[i+1] + f[i]) / h^2``.

    The result lives on the first ``n - max(trim, 2)`` grid points; the
    right end is unreliable because of the ``1/(1 - x^2)`` blow-up.
    """
    n = f.length
    trim = f.grid.default_trim() if trim is None else int(trim)
    if trim < 0:
        raise ValueError("trim must be nonnegative")
    if n < trim + 3:
        raise ValueError(f"need at least trim + 3 = {trim + 3} points, got {n}")
    keep = n - max(trim, 2)
    v = f.values
    d2 = (v[2 : keep + 2] - 2.0 * v[1 : keep + 1] + v[:keep]) / f.grid.spacing**2
    return GridFunction(f.grid, d2, keep)


def normalize_mean(f: GridFunction) -> GridFunction:
    mean = float(np.mean(f.values))
    if mean == 0.0 or not math.isfinite(mean):
        raise ValueError("cannot normalize: mean is zero or not finite")
    return f.scaled(1.0 / mean)


def candidate_density(
    mu: MuLike = MuSpec.CONSTANT,
    grid: Grid | None = None,
    trim: int | None = None,
    rule: str = "corrected",
    backend=None,
) -> GridFunction:
    """Candidate density of S from ``mu``, normalized to mean 1 over retained points."""
    if grid is None:
        grid = mu.grid if isinstance(mu, GridFunction) else Grid()
    mu_fn = resolve_mu(mu, grid)
    return normalize_mean(second_derivative(inner_bracket(mu_fn, rule, backend), trim))


def reference_s_density(s) -> np.ndarray:
    """``(1 + s)^-3`` normalized to mean 1 over the given abscissae."""
    ref = (1.0 + np.asarray(s, dtype=np.float64)) ** -3
    return ref / ref.mean()


class Positivity(NamedTuple):
    min: float
    max: float
    has_negative: bool
    negative_fraction: float


def assess_positivity(h: GridFunction, s_max: float | None = None) -> Positivity:
    """Sign summary over retained points (optionally only those with ``s <= s_max``)."""
    v = h.values
    if s_max is not None:
        v = v[h.x <= s_max]
    if v.size == 0:
        return Positivity(math.nan, math.nan, False, 0.0)
    neg = v < 0.0
    return Positivity(float(v.min()), float(v.max()), bool(neg.any()), float(neg.mean()))
