"""Hidden state of a particle pair, its sampling law and the detection rule.

A pair carries a spin direction ``u`` (uniform on the sphere; particle 2
carries ``-u``) and an independent detection threshold ``s = 2/sqrt(V) - 1``
with ``V ~ Unif(1, 4)``. A particle measured along ``a`` is detected iff
``|u.a| >= s`` and then reports ``sign(u.a)``; particle 2 uses ``B = -u.b``.

Random streams are ``numpy.random.Generator(PCG64(seed))``. One pair
consumes three doubles in the order ``z, theta, v``; bulk sampling draws a
``(M, 3)`` block, so ``sample_states(rng, M)`` reproduces ``M`` successive
``sample_pair_state(rng)`` calls exactly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

NORM_TOL = 1e-12
MAX_SEED = 2**64 - 1


class Outcome(enum.IntEnum):
    DOWN = -1
    NO_DETECTION = 0
    UP = 1

    @property
    def detected(self) -> bool:
        return self is not Outcome.NO_DETECTION


@dataclass(frozen=True)
class UnitVector3:
    x: float
    y: float
    z: float

    def __post_init__(self):
        norm2 = self.x * self.x + self.y * self.y + self.z * self.z
        if not abs(norm2 - 1.0) <= NORM_TOL:
            raise ValueError(f"not a unit vector: |v|^2 = {norm2!r}")

    @classmethod
    def from_array(cls, v) -> "UnitVector3":
        x, y, z = (float(c) for c in v)
        return cls(x, y, z)

    @classmethod
    def normalized(cls, x: float, y: float, z: float) -> "UnitVector3":
        n = math.sqrt(x * x + y * y + z * z)
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(x / n, y / n, z / n)

    def dot(self, other: "UnitVector3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def __neg__(self) -> "UnitVector3":
        return UnitVector3(-self.x, -self.y, -self.z)

    def __iter__(self):
        yield self.x
        yield self.y
        yield self.z


def equatorial_setting(angle_deg: float) -> UnitVector3:
    """Unit vector ``(cos a, sin a, 0)`` for ``a`` in degrees.

    The angle is reduced to a quadrant first so that settings 180 degrees
    apart are exact negatives and 90 degrees lands exactly on an axis.
    """
    a = math.fmod(float(angle_deg), 360.0)
    if a < 0.0:
        a += 360.0
    quadrant = int(a // 90.0) % 4
    rem = math.radians(a - 90.0 * quadrant)
    c, s = math.cos(rem), math.sin(rem)
    x, y = ((c, s), (-s, c), (-c, -s), (s, -c))[quadrant]
    return UnitVector3(x, y, 0.0)


@dataclass(frozen=True)
class HiddenPairState:
    u: UnitVector3
    s: float

    def __post_init__(self):
        if not 0.0 <= self.s <= 1.0:
            raise ValueError(f"threshold s={self.s!r} outside [0, 1]")


class PairResult(NamedTuple):
    out1: Outcome
    out2: Outcome

    @property
    def coincidence(self) -> bool:
        return self.out1.detected and self.out2.detected


# -- random streams ---------------------------------------------------------


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def make_rng(seed: int) -> np.random.Generator:
    """Master stream for ``seed``."""
    return np.random.Generator(np.random.PCG64(_check_seed(seed)))


def spawn_rngs(seed: int, n: int) -> list[np.random.Generator]:
    """``n`` independent child streams: ``SeedSequence(seed).spawn(n)``.

    Child ``k`` depends only on ``(seed, k)``, so workers can be scheduled
    in any order.
    """
    children = np.random.SeedSequence(_check_seed(seed)).spawn(n)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


# -- sampling ---------------------------------------------------------------


def unit_vector_from_draws(z, theta):
    """Trig method: ``rho = sqrt(1 - z^2)``, point ``(rho cos t, rho sin t, z)``.

    Works elementwise on arrays; returns ``(x, y, z)`` arrays.
    """
    z = np.asarray(z, dtype=np.float64)
    theta = np.asarray(theta, dtype=np.float64)
    rho = np.sqrt(1.0 - z * z)
    return rho * np.cos(theta), rho * np.sin(theta), z


def threshold_from_uniform(v):
    """``s = 2/sqrt(v) - 1`` for ``v`` in [1, 4]."""
    return 2.0 / np.sqrt(np.asarray(v, dtype=np.float64)) - 1.0


def threshold_to_amplitude(s):
    """Amplitude ``r = arccos(s) / (pi/2)``, the inverse of ``s = cos(r pi/2)``."""
    s_arr = np.asarray(s, dtype=np.float64)
    if np.any((s_arr < 0.0) | (s_arr > 1.0)) or np.any(np.isnan(s_arr)):
        raise ValueError("threshold outside [0, 1]")
    r = np.arccos(s_arr) / (np.pi / 2)
    return float(r) if r.ndim == 0 else r


def _transform_draws(u):
    # u has shape (M, 3): columns z, theta, v as uniforms on [0, 1)
    z = -1.0 + 2.0 * u[:, 0]
    theta = 2.0 * np.pi * u[:, 1]
    v = 1.0 + 3.0 * u[:, 2]
    x, y, z = unit_vector_from_draws(z, theta)
    return x, y, z, threshold_from_uniform(v)


def sample_unit_sphere(rng: np.random.Generator) -> UnitVector3:
    u = rng.random(2)
    x, y, z = unit_vector_from_draws(-1.0 + 2.0 * u[0:1], 2.0 * np.pi * u[1:2])
    return UnitVector3(float(x[0]), float(y[0]), float(z[0]))


def sample_threshold(rng: np.random.Generator) -> float:
    return float(threshold_from_uniform(1.0 + 3.0 * rng.random(1))[0])


def sample_pair_state(rng: np.random.Generator) -> HiddenPairState:
    """One pair: direction first (two draws), then threshold (one draw)."""
    x, y, z, s = _transform_draws(rng.random((1, 3)))
    return HiddenPairState(UnitVector3(float(x[0]), float(y[0]), float(z[0])), float(s[0]))


@dataclass(frozen=True, eq=False)
class StateSample:
    """``M`` hidden pair states stored column-wise (read-only arrays)."""

    ux: np.ndarray
    uy: np.ndarray
    uz: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        m = self.s.shape
        for arr in (self.ux, self.uy, self.uz, self.s):
            if arr.shape != m or arr.ndim != 1:
                raise ValueError("state columns must be 1-d and of equal length")
            arr.setflags(write=False)

    def __len__(self) -> int:
        return self.s.shape[0]

    def __getitem__(self, k: int) -> HiddenPairState:
        u = UnitVector3(float(self.ux[k]), float(self.uy[k]), float(self.uz[k]))
        return HiddenPairState(u, float(self.s[k]))

    def __iter__(self):
        for k in range(len(self)):
            yield self[k]

    def project(self, v: UnitVector3) -> np.ndarray:
        """``u . v`` for every state."""
        return self.ux * v.x + self.uy * v.y + self.uz * v.z

    @classmethod
    def from_states(cls, states: Sequence[HiddenPairState]) -> "StateSample":
        if len(states) == 0:
            raise ValueError("empty state sequence")
        cols = np.array([(st.u.x, st.u.y, st.u.z, st.s) for st in states], dtype=np.float64)
        return cls(*(np.ascontiguousarray(cols[:, k]) for k in range(4)))


def as_state_sample(states) -> StateSample:
    if isinstance(states, StateSample):
        return states
    return StateSample.from_states(list(states))


def sample_states(rng: np.random.Generator, m: int) -> StateSample:
    if m < 1:
        raise ValueError("need at least one pair")
    x, y, z, s = _transform_draws(rng.random((m, 3)))
    return StateSample(x, y, z, s)


# -- measurement --------------------------------------------------------------


def _apply_rule(value: float, s: float) -> Outcome:
    if abs(value) >= s:
        return Outcome.UP if value >= 0.0 else Outcome.DOWN
    return Outcome.NO_DETECTION


def measure_first(state: HiddenPairState, a: UnitVector3) -> Outcome:
    return _apply_rule(state.u.dot(a), state.s)


def measure_second(state: HiddenPairState, b: UnitVector3) -> Outcome:
    return _apply_rule(-state.u.dot(b), state.s)


def measure_pair(state: HiddenPairState, a: UnitVector3, b: UnitVector3) -> PairResult:
    return PairResult(measure_first(state, a), measure_second(state, b))
