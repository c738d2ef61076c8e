"""Hot loops, each in a numba flavour and a pure-numpy flavour.

Both flavours of the coincidence kernels return integer tallies, so they
agree bit for bit. The masked-kernel sums differ only in floating-point
summation order (sequential vs. numpy pairwise).
"""

import math

import numpy as np

from ._accel import njit, prange, resolve_backend

# --------------------------------------------------------------------------
# Coincidence counting
#
# For settings a, b and states (u, s):
#   A = u.a, detected_1 = |A| >= s
#   C = u.b, detected_2 = |C| >= s          (B = -C, so |B| = |C|)
# Tallies over doubly detected pairs:
#   n_detected
#   alignment = sum sign(A) * sign(C)
#   outcomes  = sum sign(A) * sign(-C)
# with sign(x) = +1 for x >= 0 (so sign(-0.0) = +1), -1 otherwise.
# --------------------------------------------------------------------------


@njit(cache=True)
def _tally_numba(ux, uy, uz, s, ax, ay, az, bx, by, bz):
    n_det = 0
    align = 0
    outcome = 0
    for k in range(s.shape[0]):
        ca = ux[k] * ax + uy[k] * ay + uz[k] * az
        cb = ux[k] * bx + uy[k] * by + uz[k] * bz
        sk = s[k]
        if abs(ca) >= sk and abs(cb) >= sk:
            n_det += 1
            sa = 1 if ca >= 0.0 else -1
            sb = 1 if cb >= 0.0 else -1
            so = 1 if -cb >= 0.0 else -1
            align += sa * sb
            outcome += sa * so
    return n_det, align, outcome


@njit(cache=True, parallel=True)
def _sweep_tally_numba(ux, uy, uz, s, settings, bx, by, bz):
    k_angles = settings.shape[0]
    out = np.zeros((k_angles, 3), dtype=np.int64)
    for j in prange(k_angles):
        n_det, align, outcome = _tally_numba(
            ux, uy, uz, s, settings[j, 0], settings[j, 1], settings[j, 2], bx, by, bz
        )
        out[j, 0] = n_det
        out[j, 1] = align
        out[j, 2] = outcome
    return out


def _tally_numpy(ux, uy, uz, s, ax, ay, az, bx, by, bz, _cb_cache=None):
    if _cb_cache is None:
        cb = ux * bx + uy * by + uz * bz
        det_b = np.abs(cb) >= s
        pos_b = cb >= 0.0
        pos_neg_b = cb <= 0.0  # -cb >= 0
    else:
        det_b, pos_b, pos_neg_b = _cb_cache
    ca = ux * ax + uy * ay + uz * az
    det = (np.abs(ca) >= s) & det_b
    n_det = int(np.count_nonzero(det))
    pos_a = ca >= 0.0
    align = n_det - 2 * int(np.count_nonzero(det & (pos_a != pos_b)))
    outcome = n_det - 2 * int(np.count_nonzero(det & (pos_a != pos_neg_b)))
    return n_det, align, outcome


def _sweep_tally_numpy(ux, uy, uz, s, settings, bx, by, bz):
    cb = ux * bx + uy * by + uz * bz
    cache = (np.abs(cb) >= s, cb >= 0.0, cb <= 0.0)
    out = np.zeros((settings.shape[0], 3), dtype=np.int64)
    for j in range(settings.shape[0]):
        ax, ay, az = settings[j]
        out[j] = _tally_numpy(ux, uy, uz, s, ax, ay, az, bx, by, bz, cache)
    return out


def coincidence_tally(ux, uy, uz, s, a, b, backend=None):
    """Return ``(n_detected, alignment_sum, outcome_sum)`` for settings ``a``, ``b``."""
    ax, ay, az = (float(c) for c in a)
    bx, by, bz = (float(c) for c in b)
    if resolve_backend(backend) == "numba":
        n, al, oc = _tally_numba(ux, uy, uz, s, ax, ay, az, bx, by, bz)
        return int(n), int(al), int(oc)
    return _tally_numpy(ux, uy, uz, s, ax, ay, az, bx, by, bz)


def sweep_tally(ux, uy, uz, s, settings, b, backend=None):
    """Tallies for every row of ``settings`` (shape ``(K, 3)``) against fixed ``b``.

    Returns an int64 array of shape ``(K, 3)``: n_detected, alignment, outcome.
    """
    settings = np.ascontiguousarray(settings, dtype=np.float64)
    bx, by, bz = (float(c) for c in b)
    if resolve_backend(backend) == "numba":
        return _sweep_tally_numba(ux, uy, uz, s, settings, bx, by, bz)
    return _sweep_tally_numpy(ux, uy, uz, s, settings, bx, by, bz)


def detection_count(component, s, backend=None):
    """Number of single-particle detections, ``sum(|component| >= s)``."""
    if resolve_backend(backend) == "numba":
        return int(_single_count_numba(component, s))
    return int(np.count_nonzero(np.abs(component) >= s))


@njit(cache=True)
def _single_count_numba(c, s):
    n = 0
    for k in range(s.shape[0]):
        if abs(c[k]) >= s[k]:
            n += 1
    return n


# --------------------------------------------------------------------------
# Masked kernel column sums for the appendix operator:
#   out[j] = sum_{i <= j} sqrt(1 - (z_i / z_j)^2) * mu_i
# Memory is O(n); the kernel matrix is never materialized.
# The ratio z_i / z_j is formed by division so the diagonal term is exactly
# sqrt(0); a hoisted reciprocal leaves ~1e-8 residues that the second
# difference amplifies by 1/h^2.
# --------------------------------------------------------------------------


@njit(cache=True, parallel=True)
def _masked_sums_numba(z, mu):
    n = z.shape[0]
    out = np.empty(n)
    for j in prange(n):
        xj = z[j]
        acc = 0.0
        for i in range(j + 1):
            r = z[i] / xj
            acc += math.sqrt(1.0 - r * r) * mu[i]
        out[j] = acc
    return out


def _masked_sums_numpy(z, mu):
    n = z.shape[0]
    out = np.empty(n)
    for j in range(n):
        r = z[: j + 1] / z[j]
        out[j] = np.sum(np.sqrt(1.0 - r * r) * mu[: j + 1])
    return out


def masked_kernel_sums(z, mu, backend=None):
    z = np.ascontiguousarray(z, dtype=np.float64)
    mu = np.ascontiguousarray(mu, dtype=np.float64)
    if z.shape != mu.shape:
        raise ValueError("z and mu must have the same shape")
    if resolve_backend(backend) == "numba":
        return _masked_sums_numba(z, mu)
    return _masked_sums_numpy(z, mu)
