import dataclasses
import math

import numpy as np
import pytest

from pearle.estimators import (
    Convention,
    SweepConfig,
    estimate_correlation,
    estimate_detection_rate,
    run_sweep,
    singlet_target,
    sweep_states,
)
from pearle.model import HiddenPairState, UnitVector3, equatorial_setting, make_rng, sample_states

A0 = equatorial_setting(0)
A90 = equatorial_setting(90)
PAIR_RATE_MIN = 4.0 / 3.0 * (1.0 - 2.0 / math.pi)


@pytest.mark.parametrize(
    "angle, conv, expected",
    [(0.0, Convention.OUTCOMES, -1.0), (math.pi / 3, Convention.ALIGNMENT, 0.5)],
)
def test_singlet_target(angle, conv, expected):
    assert singlet_target(angle, conv) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("conv", list(Convention))
def test_singlet_target_orthogonal(conv):
    assert singlet_target(math.pi / 2, conv) == pytest.approx(0.0, abs=1e-15)


def test_equal_settings_exact(states_1e5):
    out = estimate_correlation(states_1e5, A0, A0, Convention.OUTCOMES)
    aln = estimate_correlation(states_1e5, A0, A0, Convention.ALIGNMENT)
    assert out.correlation == -1.0 and aln.correlation == 1.0
    assert out.n_detected == aln.n_detected > 0


def test_accepts_sequence_of_states():
    sts = [HiddenPairState(UnitVector3(1.0, 0.0, 0.0), 0.2), HiddenPairState(UnitVector3(0.0, 1.0, 0.0), 0.2)]
    est = estimate_correlation(sts, A0, A0)
    assert est == (-1.0, 1)


def test_empty_result_flagged():
    sts = [HiddenPairState(UnitVector3(0.0, 0.0, 1.0), 0.5)]
    est = estimate_correlation(sts, A0, A90)
    assert est.empty and math.isnan(est.correlation)


def test_orthogonal_correlation(states_1e6):
    est = estimate_correlation(states_1e6, A0, A90, Convention.OUTCOMES)
    assert abs(est.correlation) <= 0.005


def test_forty_five_degrees(states_1e6):
    est = estimate_correlation(states_1e6, equatorial_setting(45), A0, Convention.ALIGNMENT)
    assert abs(est.correlation - math.cos(math.pi / 4)) <= 0.005


def test_convention_duality(states_1e5):
    for deg in (10, 77, 140, 260):
        a = equatorial_setting(deg)
        out = estimate_correlation(states_1e5, a, A0, Convention.OUTCOMES)
        aln = estimate_correlation(states_1e5, a, A0, Convention.ALIGNMENT)
        assert out.correlation == -aln.correlation


def test_detection_rates(states_1e6):
    assert abs(estimate_detection_rate(states_1e6, A0, A0) - 2.0 / 3.0) <= 0.005
    assert abs(estimate_detection_rate(states_1e6, A90, A0) - PAIR_RATE_MIN) <= 0.005
    assert estimate_detection_rate(states_1e6, equatorial_setting(180), A0) == estimate_detection_rate(
        states_1e6, A0, A0
    )


def test_negating_b_reflects_exactly(states_1e5):
    # angle(a, -b) = pi - angle(a, b)
    for deg in (0, 20, 45, 90, 123):
        a = equatorial_setting(deg)
        est = estimate_correlation(states_1e5, a, A0)
        ref = estimate_correlation(states_1e5, a, -A0)
        assert ref.correlation == -est.correlation
        assert ref.n_detected == est.n_detected


def test_rotational_invariance(states_1e6):
    # equal a.b via different, non-equatorial setting pairs
    a1, b1 = equatorial_setting(60), A0
    b2 = UnitVector3(0.0, 0.0, 1.0)
    a2 = UnitVector3(0.0, math.sqrt(3) / 2, 0.5)
    assert a1.dot(b1) == pytest.approx(a2.dot(b2), abs=1e-15)
    other = sample_states(make_rng(4242), 1_000_000)
    e1 = estimate_correlation(states_1e6, a1, b1)
    e2 = estimate_correlation(other, a2, b2)
    combined = math.hypot(1 / math.sqrt(e1.n_detected), 1 / math.sqrt(e2.n_detected))
    assert abs(e1.correlation - e2.correlation) <= 3 * combined


# -- sweeps -------------------------------------------------------------------------


def test_sweep_grid_small():
    res = run_sweep(SweepConfig(pairs=1000, seed=1, step_deg=90))
    assert [r.angle_deg for r in res.records] == [0, 90, 180, 270, 360]


def test_sweep_last_record_copied():
    res = run_sweep(SweepConfig(pairs=5000, seed=2, step_deg=10))
    first, last = res.records[0], res.records[-1]
    assert dataclasses.replace(last, angle_deg=0.0) == first


def test_sweep_deterministic():
    cfg = SweepConfig(pairs=20_000, seed=99, step_deg=15, beta_deg=30)
    assert run_sweep(cfg) == run_sweep(cfg)


def test_sweep_uses_shared_sample():
    cfg = SweepConfig(pairs=30_000, seed=5, step_deg=30, convention=Convention.ALIGNMENT)
    st = sweep_states(cfg)
    res = run_sweep(cfg)
    for rec in res.records[:-1]:
        est = estimate_correlation(st, equatorial_setting(rec.angle_deg), A0, Convention.ALIGNMENT)
        assert (rec.correlation, rec.n_detected) == est


def test_sweep_backends_identical():
    cfg = SweepConfig(pairs=20_000, seed=8, step_deg=5)
    assert run_sweep(cfg, backend="numpy") == run_sweep(cfg, backend="numba")


def test_fresh_per_angle_independent_columns():
    cfg = SweepConfig(pairs=20_000, seed=8, step_deg=30, fresh_per_angle=True)
    res = run_sweep(cfg)
    assert res == run_sweep(cfg)
    shared = run_sweep(dataclasses.replace(cfg, fresh_per_angle=False))
    assert [r.n_detected for r in res.records] != [r.n_detected for r in shared.records]
    assert run_sweep(cfg, backend="numpy") == res


def test_half_turn_reflection_in_sweep():
    res = run_sweep(SweepConfig(pairs=50_000, seed=17, step_deg=1))
    recs = res.records
    for k in range(180):
        r, q = recs[k], recs[k + 180]
        assert q.correlation == -r.correlation
        assert q.n_detected == r.n_detected


def test_records_bounded():
    res = run_sweep(SweepConfig(pairs=10_000, seed=3, step_deg=5))
    for r in res.records:
        assert abs(r.correlation) <= 1 and 0 <= r.detection_rate <= 1 and r.n_detected <= r.n_pairs
        assert r.stderr_bound == pytest.approx(1 / math.sqrt(r.n_detected))


def test_stderr_bound_honesty():
    inside = total = 0
    for seed in range(10):
        res = run_sweep(SweepConfig(pairs=100_000, seed=seed, step_deg=10))
        for r in res.records[:-1]:
            total += 1
            inside += abs(r.correlation - r.target) <= 3 * r.stderr_bound
    assert inside / total >= 0.99


@pytest.mark.parametrize(
    "kwargs",
    [dict(pairs=0, seed=1), dict(pairs=10, seed=1, step_deg=7), dict(pairs=10, seed=1, step_deg=0),
     dict(pairs=10, seed=-3), dict(pairs=10, seed=1, step_deg=400)],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        SweepConfig(**kwargs)


def test_config_accepts_fractional_step():
    assert SweepConfig(pairs=1, seed=0, step_deg=0.5).n_steps == 720


def test_max_deviation_excludes_duplicate():
    res = run_sweep(SweepConfig(pairs=2000, seed=4, step_deg=45))
    devs = [abs(r.deviation) for r in res.records[:-1]]
    assert res.max_abs_deviation() == max(devs)
    assert np.all(np.isfinite(res.column("correlation")))


@pytest.mark.parametrize("seed", [1, 2**63 + 12345])
def test_full_sweep_other_seeds_numpy(seed):
    cfg = SweepConfig(pairs=1_000_000, seed=seed, step_deg=1, convention=Convention.ALIGNMENT)
    res = run_sweep(cfg, backend="numpy")
    assert res.max_abs_deviation() <= 0.008
    outcomes = run_sweep(SweepConfig(pairs=1_000_000, seed=seed, step_deg=1), backend="numba")
    assert max(abs(r.correlation + math.cos(math.radians(r.angle_deg))) for r in outcomes.records) <= 0.008
    rates = res.column("detection_rate")
    assert rates.min() >= PAIR_RATE_MIN - 0.01 and rates.max() <= 2 / 3 + 0.01
