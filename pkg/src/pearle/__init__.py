"""Pearle's data-rejection hidden-variable model for the singlet correlations."""

from ._accel import USE_NUMBA
from .appendix import (
    Grid,
    GridFunction,
    MuSpec,
    assess_positivity,
    candidate_density,
    check_mu_symmetry,
    inner_bracket,
    mu_from_g_constant,
    second_derivative,
)
from .density import (
    pearle_combined_density,
    r_cdf,
    r_density,
    riemann_bounds,
    s_cdf,
    s_density,
    uniform_ball_density,
)
from .estimators import (
    AngleRecord,
    Convention,
    SweepConfig,
    SweepResult,
    estimate_correlation,
    estimate_detection_rate,
    run_sweep,
    singlet_target,
)
from .model import (
    HiddenPairState,
    Outcome,
    PairResult,
    StateSample,
    UnitVector3,
    equatorial_setting,
    make_rng,
    measure_first,
    measure_pair,
    measure_second,
    sample_pair_state,
    sample_states,
    sample_threshold,
    sample_unit_sphere,
    spawn_rngs,
    threshold_to_amplitude,
)

__version__ = "0.1.0"
