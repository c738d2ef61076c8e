"""Seeded angle sweeps: conditional correlations and pair-detection rates."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .model import (
    StateSample,
    UnitVector3,
    _check_seed,
    as_state_sample,
    equatorial_setting,
    make_rng,
    sample_states,
    spawn_rngs,
)


class Convention(str, enum.Enum):
    """Which product is averaged over coincidences.

    ``OUTCOMES`` uses the reported results ``sign(A) sign(B)`` (target
    ``-a.b``); ``ALIGNMENT`` uses ``sign(u.a) sign(u.b)`` (target ``+a.b``).
    """

    OUTCOMES = "outcomes"
    ALIGNMENT = "alignment"


class CorrelationEstimate(NamedTuple):
    correlation: float
    n_detected: int

    @property
    def empty(self) -> bool:
        return self.n_detected == 0


def singlet_target(angle_rad: float, convention: Convention = Convention.OUTCOMES) -> float:
    c = math.cos(angle_rad)
    return -c if Convention(convention) is Convention.OUTCOMES else c


def estimate_correlation(
    states,
    a: UnitVector3,
    b: UnitVector3,
    convention: Convention = Convention.OUTCOMES,
    backend=None,
) -> CorrelationEstimate:
    """Average product over pairs with both particles detected.

    With no coincidences the correlation is NaN and ``empty`` is true.
    """
    st = as_state_sample(states)
    n, align, outcome = kernels.coincidence_tally(st.ux, st.uy, st.uz, st.s, a, b, backend)
    if n == 0:
        return CorrelationEstimate(math.nan, 0)
    total = outcome if Convention(convention) is Convention.OUTCOMES else align
    return CorrelationEstimate(total / n, n)


def estimate_detection_rate(states, a: UnitVector3, b: UnitVector3, backend=None) -> float:
    """Fraction of emitted pairs with both particles detected."""
    st = as_state_sample(states)
    n, _, _ = kernels.coincidence_tally(st.ux, st.uy, st.uz, st.s, a, b, backend)
    return n / len(st)


def single_detection_rate(states, setting: UnitVector3, backend=None) -> float:
    """Fraction of particles detected at one station, ignoring the partner."""
    st = as_state_sample(states)
    return kernels.detection_count(st.project(setting), st.s, backend) / len(st)


@dataclass(frozen=True)
class SweepConfig:
    pairs: int
    seed: int
    beta_deg: float = 0.0
    step_deg: float = 1.0
    convention: Convention = Convention.OUTCOMES
    fresh_per_angle: bool = False

    def __post_init__(self):
        if int(self.pairs) < 1:
            raise ValueError("pairs must be >= 1")
        _check_seed(self.seed)
        object.__setattr__(self, "convention", Convention(self.convention))
        step = float(self.step_deg)
        if not 0.0 < step <= 360.0:
            raise ValueError("step_deg must lie in (0, 360]")
        k = round(360.0 / step)
        if abs(k * step - 360.0) > 1e-9:
            raise ValueError(f"step_deg={step} does not divide 360")

    @property
    def n_steps(self) -> int:
        """Number of distinct grid angles in [0, 360)."""
        return round(360.0 / float(self.step_deg))

    def angles_deg(self) -> np.ndarray:
        """Grid angles 0, step, ..., 360 (the last one duplicates 0)."""
        return np.arange(self.n_steps + 1) * float(self.step_deg)


@dataclass(frozen=True)
class AngleRecord:
    angle_deg: float
    n_detected: int
    n_pairs: int
    correlation: float
    target: float
    detection_rate: float
    stderr_bound: float

    @property
    def deviation(self) -> float:
        return self.correlation - self.target


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    records: tuple[AngleRecord, ...]

    def max_abs_deviation(self) -> float:
        """``max |correlation - target|`` over the distinct angles [0, 360)."""
        return max(abs(r.deviation) for r in self.records[:-1])

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records])


def _record(angle, counts, pairs, a, b, convention):
    n, align, outcome = (int(c) for c in counts)
    ab = a.dot(b)
    if convention is Convention.OUTCOMES:
        total, target = outcome, -ab
    else:
        total, target = align, ab
    corr = total / n if n else math.nan
    stderr = 1.0 / math.sqrt(n) if n else math.inf
    return AngleRecord(float(angle), n, pairs, corr, target, n / pairs, stderr)


def run_sweep(config: SweepConfig, backend=None) -> SweepResult:
    """Sweep setting ``a`` around the equator against a fixed ``b``.

    By default one sample of ``config.pairs`` states, drawn from
    ``make_rng(seed)``, is reused for every angle. With ``fresh_per_angle``
    angle ``k`` gets its own sample from child stream ``k`` of
    ``spawn_rngs(seed, n_steps)``.
    """
    angles = config.angles_deg()
    k = config.n_steps
    b = equatorial_setting(config.beta_deg)
    settings = [equatorial_setting(alpha) for alpha in angles[:k]]
    pairs = int(config.pairs)

    if not config.fresh_per_angle:
        st = sample_states(make_rng(config.seed), pairs)
        grid = np.array([tuple(a) for a in settings])
        counts = kernels.sweep_tally(st.ux, st.uy, st.uz, st.s, grid, b, backend)
    else:
        counts = np.zeros((k, 3), dtype=np.int64)
        for j, rng in enumerate(spawn_rngs(config.seed, k)):
            st = sample_states(rng, pairs)
            counts[j] = kernels.coincidence_tally(st.ux, st.uy, st.uz, st.s, settings[j], b, backend)

    records = [
        _record(angles[j], counts[j], pairs, settings[j], b, config.convention) for j in range(k)
    ]
    first = records[0]
    records.append(AngleRecord(float(angles[k]), *[getattr(first, f) for f in _COPIED]))
    return SweepResult(config, tuple(records))


_COPIED = ("n_detected", "n_pairs", "correlation", "target", "detection_rate", "stderr_bound")


def sweep_states(config: SweepConfig) -> StateSample:
    """The shared state sample ``run_sweep`` uses when ``fresh_per_angle`` is off."""
    return sample_states(make_rng(config.seed), int(config.pairs))
