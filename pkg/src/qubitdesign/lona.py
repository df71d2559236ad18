"""Greedy locally-optimal non-adaptive (LONA) schedules.

Each step appends the integer evolution time that minimizes the expected
posterior variance of the extended schedule, averaging over every outcome
string of the whole schedule (the schedule is fixed in advance).
"""

import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import check_cap, check_positive_int, check_schedule
from .fourier import raw_moments, update_coeffs
from .grid import plus_probability
from .objective import DEFAULT_CAP, fourier_leaves

__all__ = [
    "LonaTrace",
    "best_next_time",
    "lona_schedule",
    "lona_extend_mc",
    "LonaScheduler",
]

MIN_SEARCH_BOUND = 8


@dataclass(frozen=True)
class LonaTrace:
    """Result of a greedy run.

    ``schedule`` is the ascending multiset of chosen times; ``selection_order``
    lists them in the order the greedy search picked them, and
    ``per_step_ev[k]`` is the expected variance after the first ``k + 1`` picks.
    """

    schedule: tuple
    selection_order: tuple
    per_step_ev: tuple
    search_bound_used: tuple


def _candidate_evs(leaves, candidates):
    evs = []
    for m in candidates:
        total = []
        for sign in (1.0, -1.0):
            mass, first, second = raw_moments(update_coeffs(leaves, m, sign))
            ok = mass > 0
            total.append(second[ok] - first[ok] ** 2 / mass[ok])
        evs.append(math.fsum(np.concatenate(total).tolist()))
    return evs


def _argmin(candidates, evs):
    # strict comparison keeps the smallest m on ties
    best = 0
    for i in range(1, len(evs)):
        if evs[i] < evs[best]:
            best = i
    return candidates[best], evs[best]


def best_next_time(prefix, m_max, cap=DEFAULT_CAP):
    """Return ``(m, ev)`` minimizing E[V] of ``prefix + [m]`` over ``m = 1..m_max``."""
    prefix = check_schedule(prefix, integer=True).astype(int)
    m_max = check_positive_int(m_max, "m_max")
    check_cap(prefix.size + 1, cap)
    leaves = fourier_leaves(prefix)
    candidates = list(range(1, m_max + 1))
    return _argmin(candidates, _candidate_evs(leaves, candidates))


def _adaptive_step(prefix):
    leaves = fourier_leaves(prefix)
    bound = max(MIN_SEARCH_BOUND, 2 * max(prefix, default=0))
    candidates = list(range(1, bound + 1))
    evs = _candidate_evs(leaves, candidates)
    m, ev = _argmin(candidates, evs)
    while True:
        # widen the window by half and require the minimizer to stay put
        wider = math.ceil(1.5 * bound)
        extra = list(range(bound + 1, wider + 1))
        candidates += extra
        evs += _candidate_evs(leaves, extra)
        bound = wider
        m_new, ev_new = _argmin(candidates, evs)
        if m_new == m:
            return m, ev, bound
        m, ev = m_new, ev_new


def lona_schedule(n, cap=DEFAULT_CAP, m_max=None):
    """Greedy schedule of ``n`` integer times.

    With ``m_max=None`` the search window is ``max(8, 2 * max(prefix))`` and is
    then widened by 50% until the minimizer is stable.
    """
    n = check_positive_int(n, "n")
    check_cap(n, cap)
    order, evs, bounds = [], [], []
    for _ in range(n):
        if m_max is None:
            m, ev, bound = _adaptive_step(order)
        else:
            m, ev = best_next_time(order, m_max, cap)
            bound = m_max
        order.append(int(m))
        evs.append(float(ev))
        bounds.append(int(bound))
    return LonaTrace(tuple(sorted(order)), tuple(order), tuple(evs), tuple(bounds))


def _cosine_power_integrals(p_max):
    """Integrals of u^k cos(p pi u) over [0, 1] for k = 0, 1, 2 and p = 0..p_max."""
    p = np.arange(p_max + 1, dtype=float)
    alt = np.where(p % 2 == 0, 1.0, -1.0)
    sq = np.where(p > 0, (p * np.pi) ** 2, 1.0)
    table = np.stack([np.zeros_like(p), (alt - 1.0) / sq, 2.0 * alt / sq])
    table[:, 0] = (1.0, 0.5, 1.0 / 3.0)
    return table


def _product_moment_weights(bandwidth, candidates):
    """Weights W with (a @ W)[k, c] = integral of u^k U(u) cos(m_c pi u) on [0, 1]."""
    q = np.arange(bandwidth + 1)
    m = np.asarray(candidates)[None, :]
    table = _cosine_power_integrals(bandwidth + int(m.max()))
    # cos(q x) cos(m x) = (cos((q + m) x) + cos((q - m) x)) / 2
    w = 0.5 * (table[:, q[:, None] + m] + table[:, np.abs(q[:, None] - m)])
    return w.transpose(1, 0, 2)


def lona_extend_mc(prefix, n, samples=4000, seed=0, omega0=1.0):
    """Continue a greedy schedule past the enumeration cap with a sampled objective.

    Candidate times are scored by the Monte-Carlo mean posterior variance over
    a fixed set of ``samples`` simulated trajectories (common random numbers,
    so candidate comparisons share their noise). Returns
    ``(selection_order, per_step_estimates)`` covering the appended steps.
    """
    prefix = [int(m) for m in check_schedule(prefix, integer=True)]
    n = check_positive_int(n, "n")
    rng = np.random.default_rng(seed)
    draws = rng.random((samples, n + 1))
    u = draws[:, 0]

    def signs(m, k):
        return np.where(draws[:, k + 1, None] < plus_probability(m, u[:, None]), 1.0, -1.0)

    def advance(a, m, k):
        b = update_coeffs(a, m, signs(m, k)[:, 0])
        return b / b[:, :1]

    # work on the unit interval; variances scale by omega0^2
    a = np.ones((samples, 1))
    order = list(prefix)
    for k, m in enumerate(prefix):
        a = advance(a, m, k)
    estimates = []
    for k in range(len(prefix), n):
        bound = max(MIN_SEARCH_BOUND, 2 * max(order, default=0))
        candidates = np.arange(1, bound + 1)
        weights = _product_moment_weights(a.shape[1] - 1, candidates)
        prod = np.einsum("sq,qkc->skc", a, weights, optimize=True)
        base = np.stack(raw_moments(a), axis=1)[:, :, None]
        mom = 0.5 * (base - signs(candidates, k)[:, None, :] * prod)
        var = mom[:, 2] / mom[:, 0] - (mom[:, 1] / mom[:, 0]) ** 2
        evs = (omega0**2 * var.mean(axis=0)).tolist()
        m, ev = _argmin(candidates.tolist(), evs)
        order.append(m)
        estimates.append(ev)
        a = advance(a, m, k)
    return tuple(order), tuple(estimates)


class LonaScheduler(BaseEstimator):
    """Estimator-style wrapper around :func:`lona_schedule`.

    After ``fit`` the greedy result is available as ``schedule_``,
    ``selection_order_``, ``step_ev_`` and ``search_bounds_``.
    """

    def __init__(self, n_measurements=10, m_max=None, cap=DEFAULT_CAP):
        self.n_measurements = n_measurements
        self.m_max = m_max
        self.cap = cap

    def fit(self, X=None, y=None):
        trace = lona_schedule(self.n_measurements, cap=self.cap, m_max=self.m_max)
        self.trace_ = trace
        self.schedule_ = np.array(trace.schedule, dtype=int)
        self.selection_order_ = np.array(trace.selection_order, dtype=int)
        self.step_ev_ = np.array(trace.per_step_ev)
        self.search_bounds_ = np.array(trace.search_bound_used, dtype=int)
        self.expected_variance_ = float(trace.per_step_ev[-1])
        return self
