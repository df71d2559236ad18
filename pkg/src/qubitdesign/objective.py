"""Expected posterior variance of a fixed (non-adaptive) measurement schedule.

The exact value sums ``P(r) V(r)`` over all ``2**N`` outcome strings ``r``.
Since ``P(r) V(r) = S2(r) - S1(r)**2 / S0(r)`` in terms of the unnormalized
branch moments ``S0, S1, S2``, only those three numbers are needed per leaf.

Outcome strings are ordered with the first measurement as the most
significant bit and PLUS before MINUS.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _batch
from ._validation import check_cap, check_positive_int, check_schedule, is_integer_schedule
from .fourier import raw_moments, update_coeffs
from .grid import DEFAULT_GRID_SIZE, midpoints, plus_probability

__all__ = [
    "ObjectiveReport",
    "BranchTable",
    "DEFAULT_CAP",
    "outcome_tree",
    "expected_variance_exact",
    "expected_variance_mc",
    "expected_variance",
    "make_objective",
    "resolve_engine",
]

DEFAULT_CAP = 16
# subtrees at or below this depth are expanded as one dense array
_DENSE_DEPTH = 12


@dataclass(frozen=True)
class ObjectiveReport:
    expected_variance: float
    branch_count: int
    method: str
    stderr: float = 0.0
    samples: int = 0


@dataclass(frozen=True, eq=False)
class BranchTable:
    """Per-branch masses and posterior moments for every outcome string."""

    outcomes: np.ndarray  # (2**N, N) bool, True is PLUS
    mass: np.ndarray
    mean: np.ndarray
    variance: np.ndarray

    @property
    def expected_variance(self):
        ok = self.mass > 0
        return math.fsum((self.mass[ok] * self.variance[ok]).tolist())


def resolve_engine(times, engine):
    if engine == "auto":
        return "fourier" if is_integer_schedule(times) else "grid"
    if engine not in ("fourier", "grid"):
        raise ValueError(f"unknown engine {engine!r}; expected 'fourier', 'grid' or 'auto'")
    if engine == "fourier" and len(times) and not is_integer_schedule(times):
        raise ValueError("the fourier engine requires positive integer evolution times")
    return engine


def _outcome_bits(n):
    idx = np.arange(2**n)[:, None]
    shifts = np.arange(n - 1, -1, -1)[None, :]
    return ((idx >> shifts) & 1) == 0


def fourier_leaves(times, start=None, omega0=1.0):
    """Leaf coefficient rows for every outcome string, built level by level.

    Each tree node is produced by one update of its parent row.
    """
    a = np.full((1, 1), 1.0 / omega0) if start is None else np.atleast_2d(start)
    for m in times:
        m = int(m)
        plus = update_coeffs(a, m, 1.0)
        minus = update_coeffs(a, m, -1.0)
        a = np.stack([plus, minus], axis=1).reshape(-1, plus.shape[-1])
    return a


def _fourier_raw(times, omega0):
    times = [int(m) for m in times]

    def descend(a, depth):
        remaining = times[depth:]
        if len(remaining) <= _DENSE_DEPTH:
            return raw_moments(fourier_leaves(remaining, a, omega0), omega0)
        m = remaining[0]
        parts = [descend(update_coeffs(a, m, s), depth + 1) for s in (1.0, -1.0)]
        return tuple(np.concatenate(x) for x in zip(*parts))

    return descend(np.full((1, 1), 1.0 / omega0), 0)


def _grid_half(times, w, omega0):
    L = np.ones((1, w.size))
    for t in times:
        p = plus_probability(t, w, omega0)
        L = np.stack([L * p, L * (1.0 - p)], axis=1).reshape(-1, w.size)
    return L


def _grid_raw(times, G, omega0):
    # leaf likelihood factorizes over the two halves of the schedule, so every
    # branch moment is an entry of a (2^h x 2^(N-h)) matrix product
    w = midpoints(G, omega0)
    h = len(times) // 2
    A = _grid_half(times[:h], w, omega0)
    B = _grid_half(times[h:], w, omega0)
    dw = 1.0 / G  # flat prior 1/omega0 times cell width omega0/G
    mass = ((A * dw) @ B.T).ravel()
    first = ((A * (w * dw)) @ B.T).ravel()
    second = ((A * (w * w * dw)) @ B.T).ravel()
    return mass, first, second


def _raw_branches(times, engine, grid_size, omega0):
    if engine == "fourier":
        return _fourier_raw(times, omega0)
    return _grid_raw(np.asarray(times, dtype=float), grid_size, omega0)


def outcome_tree(times, engine="auto", grid_size=DEFAULT_GRID_SIZE, cap=DEFAULT_CAP, omega0=1.0):
    """Enumerate all outcome strings with their probabilities and posterior moments.

    Zero-probability branches get NaN mean and variance.
    """
    times = check_schedule(times)
    check_cap(times.size, cap)
    engine = resolve_engine(times, engine)
    mass, first, second = _raw_branches(times, engine, grid_size, omega0)
    with np.errstate(invalid="ignore", divide="ignore"):
        mean = np.where(mass > 0, first / mass, np.nan)
        var = np.where(mass > 0, second / mass - mean**2, np.nan)
    return BranchTable(_outcome_bits(times.size), mass, mean, var)


def expected_variance_exact(
    times, engine="auto", grid_size=DEFAULT_GRID_SIZE, cap=DEFAULT_CAP, omega0=1.0
):
    """Exact expected posterior variance by enumerating the outcome tree.

    Raises :class:`EnumerationCapError` when ``len(times) > cap``.
    """
    times = check_schedule(times)
    check_cap(times.size, cap)
    engine = resolve_engine(times, engine)
    n_branches = 2**times.size
    method = f"exact-{engine}"
    if times.size == 0 and engine == "fourier":
        return ObjectiveReport(omega0**2 / 12.0, 1, method)
    mass, first, second = _raw_branches(times, engine, grid_size, omega0)
    ok = mass > 0
    terms = second[ok] - first[ok] ** 2 / mass[ok]
    return ObjectiveReport(math.fsum(terms.tolist()), n_branches, method)


def expected_variance(times, engine="auto", grid_size=DEFAULT_GRID_SIZE, cap=DEFAULT_CAP):
    return expected_variance_exact(times, engine, grid_size, cap).expected_variance


def expected_variance_mc(times, samples, seed, grid_size=DEFAULT_GRID_SIZE, omega0=1.0):
    """Monte-Carlo estimate of the expected posterior variance.

    Sample ``i`` uses row ``i`` of a ``(samples, N + 1)`` uniform matrix drawn
    from ``numpy.random.default_rng(seed)``: column 0 sets the true frequency,
    the rest decide the outcomes. The estimate is therefore fixed by
    ``(seed, samples)`` alone.
    """
    times = check_schedule(times)
    samples = check_positive_int(samples, "samples", min_val=100)
    rng = np.random.default_rng(seed)
    draws = rng.random((samples, times.size + 1))
    _, _, variances = _batch.simulate(
        times, omega0 * draws[:, 0], draws[:, 1:], grid_size, omega0
    )
    ev, stderr = _batch.mean_and_stderr(variances)
    return ObjectiveReport(ev, samples, "monte-carlo", stderr, samples)


def make_objective(engine="grid", grid_size=DEFAULT_GRID_SIZE, cap=DEFAULT_CAP):
    """Return ``f(times) -> E[V]`` for use as an optimizer objective."""

    def objective(times):
        return expected_variance_exact(times, engine, grid_size, cap).expected_variance

    return objective
