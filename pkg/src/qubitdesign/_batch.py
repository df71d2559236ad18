"""Vectorized trajectory simulation over many true frequencies at once.

Each row ``i`` is one trajectory: true frequency ``omegas[i]`` and outcome
``k`` is PLUS iff ``uniforms[i, k] < p(+ | t_k, omegas[i])``. Rows never
interact, so chunking does not change any result.
"""

import math

import numpy as np

from ._validation import is_integer_schedule
from .fourier import normalized_moments, update_coeffs
from .grid import DEFAULT_GRID_SIZE, midpoints, plus_probability

_MAX_CELLS = 4_000_000


def simulate(times, omegas, uniforms, grid_size=DEFAULT_GRID_SIZE, omega0=1.0):
    """Return ``(outcomes, means, variances)`` for a batch of trajectories.

    Integer schedules use the exact cosine-series posterior; anything else
    falls back to the midpoint grid with ``grid_size`` points.
    """
    times = np.asarray(times, dtype=float)
    omegas = np.asarray(omegas, dtype=float)
    uniforms = np.asarray(uniforms, dtype=float).reshape(len(omegas), len(times))
    p_plus = plus_probability(times[None, :], omegas[:, None], omega0)
    outcomes = uniforms < p_plus
    B = len(omegas)
    means = np.empty(B)
    variances = np.empty(B)
    if times.size == 0:
        means[:] = omega0 / 2.0
        variances[:] = omega0**2 / 12.0
        return outcomes, means, variances

    integer = is_integer_schedule(times)
    width = int(times.sum()) + 1 if integer else grid_size
    chunk = max(1, _MAX_CELLS // width)
    for lo in range(0, B, chunk):
        sl = slice(lo, min(B, lo + chunk))
        if integer:
            mu, var = _fourier_rows(times.astype(int), outcomes[sl], omega0)
        else:
            mu, var = _grid_rows(times, outcomes[sl], grid_size, omega0)
        means[sl] = mu
        variances[sl] = var
    return outcomes, means, variances


def _fourier_rows(times, outcomes, omega0):
    a = np.full((outcomes.shape[0], 1), 1.0 / omega0)
    for k, m in enumerate(times):
        sign = np.where(outcomes[:, k], 1.0, -1.0)
        a = update_coeffs(a, int(m), sign)
        # per-row rescaling keeps long trajectories away from underflow
        a /= a[:, :1]
    mean, _, var = normalized_moments(a, omega0)
    return mean, var


def _grid_rows(times, outcomes, G, omega0):
    w = midpoints(G, omega0)
    post = np.ones((outcomes.shape[0], G))
    for k, t in enumerate(times):
        p = plus_probability(t, w, omega0)
        post *= np.where(outcomes[:, k, None], p, 1.0 - p)
        post /= post.max(axis=1, keepdims=True)
    mass = post.sum(axis=1)
    mean = (post @ w) / mass
    m2 = (post @ (w * w)) / mass
    return mean, m2 - mean**2


def mean_and_stderr(values):
    """Compensated mean and its standard error; exact when all values agree."""
    values = np.asarray(values, dtype=float)
    if np.all(values == values[0]):
        return float(values[0]), 0.0
    mean = math.fsum(values.tolist()) / values.size
    return mean, float(np.std(values, ddof=1) / math.sqrt(values.size))
