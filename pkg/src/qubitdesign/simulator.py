"""Trajectory simulation for a known true frequency.

The point estimate is the posterior mean, which minimizes the Bayes risk
under squared error; its expected squared error therefore equals the
expected posterior variance when the truth is drawn from the prior.
"""

from dataclasses import dataclass

import numpy as np

from . import _batch
from ._validation import check_frequency, check_positive_int, check_schedule
from .fourier import FourierPosterior
from .grid import DEFAULT_GRID_SIZE, GridPosterior, plus_probability
from .model import Outcome
from .objective import resolve_engine

__all__ = [
    "TrajectoryRecord",
    "BenchmarkResult",
    "sample_outcome",
    "run_trajectory",
    "benchmark_schedule",
]


@dataclass(frozen=True)
class TrajectoryRecord:
    true_omega: float
    schedule: tuple
    outcomes: tuple
    final_mean: float
    final_variance: float

    @property
    def squared_error(self):
        return (self.final_mean - self.true_omega) ** 2


@dataclass(frozen=True)
class BenchmarkResult:
    mean_squared_error: float
    mean_posterior_variance: float
    stderr: float
    mse_stderr: float
    trials: int


def sample_outcome(t, true_omega, rng, omega0=1.0):
    """Draw one measurement outcome; consumes exactly one uniform from ``rng``."""
    if t < 0:
        raise ValueError(f"evolution time must be non-negative, got {t}")
    check_frequency(true_omega, omega0)
    return Outcome.PLUS if rng.random() < plus_probability(t, true_omega, omega0) else Outcome.MINUS


def run_trajectory(times, true_omega, seed, engine="auto", grid_size=DEFAULT_GRID_SIZE, omega0=1.0):
    times = check_schedule(times)
    true_omega = float(check_frequency(true_omega, omega0))
    engine = resolve_engine(times, engine)
    rng = np.random.default_rng(seed)
    if engine == "fourier":
        posterior = FourierPosterior.flat(omega0)
        times_used = [int(t) for t in times]
    else:
        posterior = GridPosterior.flat(grid_size, omega0)
        times_used = [float(t) for t in times]
    outcomes = []
    for t in times_used:
        outcome = sample_outcome(t, true_omega, rng, omega0)
        posterior = posterior.update(t, outcome)
        outcomes.append(outcome)
    mean, _, var = posterior.moments()
    return TrajectoryRecord(true_omega, tuple(times_used), tuple(outcomes), mean, var)


def benchmark_schedule(times, trials, seed, grid_size=DEFAULT_GRID_SIZE, omega0=1.0):
    """Average estimation error and posterior variance over truths drawn from the prior.

    Trial ``i`` takes row ``i`` of a ``(trials, N + 1)`` uniform matrix from
    ``numpy.random.default_rng(seed)`` (same layout as
    :func:`~qubitdesign.objective.expected_variance_mc`).
    """
    times = check_schedule(times)
    trials = check_positive_int(trials, "trials", min_val=100)
    rng = np.random.default_rng(seed)
    draws = rng.random((trials, times.size + 1))
    omegas = omega0 * draws[:, 0]
    _, means, variances = _batch.simulate(times, omegas, draws[:, 1:], grid_size, omega0)
    mpv, stderr = _batch.mean_and_stderr(variances)
    mse, mse_stderr = _batch.mean_and_stderr((means - omegas) ** 2)
    return BenchmarkResult(mse, mpv, stderr, mse_stderr, trials)
