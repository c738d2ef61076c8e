"""The numba kernels and their numpy twins must agree."""

import os
import subprocess
import sys

import numpy as np
import pytest

from pearle import _accel, kernels
from pearle.model import equatorial_setting, make_rng, sample_states

pytestmark = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")


@pytest.fixture(scope="module")
def sample():
    return sample_states(make_rng(123), 20_000)


def test_sweep_tallies_identical(sample):
    settings = np.array([tuple(equatorial_setting(a)) for a in range(0, 360, 7)])
    b = equatorial_setting(33.0)
    args = (sample.ux, sample.uy, sample.uz, sample.s, settings, b)
    assert np.array_equal(kernels.sweep_tally(*args, backend="numba"), kernels.sweep_tally(*args, backend="numpy"))


def test_single_tally_identical(sample):
    a, b = (0.6, 0.0, 0.8), (0.0, 0.28, 0.96)
    args = (sample.ux, sample.uy, sample.uz, sample.s, a, b)
    assert kernels.coincidence_tally(*args, backend="numba") == kernels.coincidence_tally(*args, backend="numpy")


def test_detection_count_identical(sample):
    c = sample.ux
    assert kernels.detection_count(c, sample.s, "numba") == kernels.detection_count(c, sample.s, "numpy")


@pytest.mark.parametrize("n", [2, 17, 500])
def test_masked_sums_agree(n):
    z = np.linspace(1e-9, 1 - 1e-9, n)
    mu = z * np.sqrt(1 - z * z)
    nb = kernels.masked_kernel_sums(z, mu, "numba")
    ref = kernels.masked_kernel_sums(z, mu, "numpy")
    np.testing.assert_allclose(nb, ref, rtol=1e-13, atol=1e-15)


def test_masked_sums_bruteforce():
    z = np.linspace(0.01, 0.99, 40)
    mu = np.cos(z)
    dense = np.sqrt(np.clip(1 - (z[:, None] / z[None, :]) ** 2, 0, None))
    dense[z[:, None] > z[None, :]] = 0.0
    np.testing.assert_allclose(kernels.masked_kernel_sums(z, mu), mu @ dense, rtol=1e-13)


def test_unknown_backend():
    with pytest.raises(ValueError):
        _accel.resolve_backend("cuda")


def test_env_flag_selects_numpy():
    code = "from pearle import _accel; print(_accel.resolve_backend())"
    env = dict(os.environ, PEARLE_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
    env["PEARLE_DISABLE_NUMBA"] = "0"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numba"


def test_thread_count_does_not_change_tallies(sample):
    import numba

    settings = np.array([tuple(equatorial_setting(a)) for a in range(0, 360, 10)])
    b = equatorial_setting(0.0)
    args = (sample.ux, sample.uy, sample.uz, sample.s, settings, b)
    full = kernels.sweep_tally(*args, backend="numba")
    prev = numba.get_num_threads()
    numba.set_num_threads(1)
    try:
        single = kernels.sweep_tally(*args, backend="numba")
    finally:
        numba.set_num_threads(prev)
    assert np.array_equal(full, single)
