"""Constriction-factor particle swarm search over measurement schedules.

Particles live in increment space ``dt_1 = t_1, dt_k = t_k - t_{k-1}``, which
picks the ascending representative of every permutation-equivalent schedule.
Positions with a negative increment are not evaluated; they score a fixed
penalty instead, so the swarm stays on unique schedules.

Randomness is drawn from ``numpy.random.default_rng([seed, particle, step])``
(step 0 is initialization), so a run is fully determined by its config and
does not depend on evaluation order.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import check_positive_int, check_schedule
from .grid import DEFAULT_GRID_SIZE
from .model import dt_to_times, is_feasible
from .objective import make_objective

__all__ = [
    "PsoConfig",
    "Swarm",
    "SwarmTrace",
    "constriction_factor",
    "penalized_objective",
    "init_swarm",
    "step_swarm",
    "optimize",
    "PsoScheduler",
]


def constriction_factor(c1, c2):
    """``2 / |2 - phi - sqrt(phi^2 - 4 phi)|`` with ``phi = c1 + c2 > 4``."""
    phi = c1 + c2
    if not phi > 4:
        raise ValueError(f"constriction factor needs c1 + c2 > 4, got {phi}")
    return 2.0 / abs(2.0 - phi - math.sqrt(phi * phi - 4.0 * phi))


@dataclass(frozen=True)
class PsoConfig:
    swarm_size: int = 16
    c1: float = 2.05
    c2: float = 2.05
    chi: float = None  # derived from c1, c2 when None
    v_max: float = 2.0
    penalty: float = 10.0
    init: str = "range"
    dt1_range: tuple = (0.0, 1.5)
    dti_range: tuple = (0.0, 2.0)
    base_schedule: tuple = None
    radius: float = 0.5
    init_velocity_range: tuple = (-1.0, 1.0)
    iterations: int = 200
    seed: int = 0
    per_dimension_random: bool = False

    def __post_init__(self):
        check_positive_int(self.swarm_size, "swarm_size")
        check_positive_int(self.iterations, "iterations")
        check_positive_int(self.seed, "seed", min_val=0)
        if self.chi is None:
            object.__setattr__(self, "chi", constriction_factor(self.c1, self.c2))
        elif not 0 < self.chi:
            raise ValueError(f"chi must be positive, got {self.chi}")
        if not self.v_max > 0:
            raise ValueError(f"v_max must be positive, got {self.v_max}")
        if not self.penalty > 1.0 / 12.0:
            raise ValueError("penalty must exceed the prior variance 1/12")
        if self.init not in ("range", "around_schedule"):
            raise ValueError(f"unknown init mode {self.init!r}")
        if self.init == "around_schedule":
            if self.base_schedule is None:
                raise ValueError("around_schedule init needs base_schedule")
            base = check_schedule(self.base_schedule, allow_empty=False, name="base_schedule")
            object.__setattr__(self, "base_schedule", tuple(float(t) for t in base))
            if not self.radius >= 0:
                raise ValueError(f"radius must be non-negative, got {self.radius}")


@dataclass(frozen=True, eq=False)
class Swarm:
    positions: np.ndarray
    velocities: np.ndarray
    values: np.ndarray
    best_positions: np.ndarray
    best_values: np.ndarray
    iteration: int = 0

    @property
    def global_index(self):
        return int(np.argmin(self.best_values))

    @property
    def global_best_position(self):
        return self.best_positions[self.global_index]

    @property
    def global_best_value(self):
        return float(self.best_values[self.global_index])


@dataclass
class SwarmTrace:
    best_ev: list = field(default_factory=list)
    mean_ev: list = field(default_factory=list)
    spread: list = field(default_factory=list)

    def record(self, swarm, penalty):
        feasible = swarm.values < penalty
        self.best_ev.append(swarm.global_best_value)
        self.mean_ev.append(float(swarm.values[feasible].mean()) if feasible.any() else math.nan)
        centred = swarm.positions - swarm.positions.mean(axis=0)
        self.spread.append(float(np.sqrt((centred**2).sum(axis=1).mean())))

    def rows(self):
        return list(zip(range(len(self.best_ev)), self.best_ev, self.mean_ev, self.spread))


def penalized_objective(d, base, penalty):
    """``base(times)`` for feasible increments, ``penalty`` (without calling base) otherwise."""
    if not is_feasible(d):
        return float(penalty)
    return float(base(dt_to_times(d)))


def _stream(seed, particle, step):
    return np.random.default_rng([seed, particle, step])


def _initial_position(cfg, dim, rng):
    if cfg.init == "range":
        lo = np.full(dim, cfg.dti_range[0])
        hi = np.full(dim, cfg.dti_range[1])
        lo[0], hi[0] = cfg.dt1_range
        return rng.uniform(lo, hi)
    base = np.asarray(cfg.base_schedule, dtype=float)
    if base.size != dim:
        raise ValueError(f"base schedule has {base.size} times, swarm dimension is {dim}")
    times = np.sort(base) + rng.uniform(-cfg.radius, cfg.radius, dim)
    # clamping negative increments to zero is a running maximum on the times
    times = np.maximum.accumulate(np.maximum(times, 0.0))
    return np.diff(times, prepend=0.0)


def init_swarm(cfg, dim, objective):
    dim = check_positive_int(dim, "dim")
    positions = np.empty((cfg.swarm_size, dim))
    velocities = np.empty((cfg.swarm_size, dim))
    for i in range(cfg.swarm_size):
        rng = _stream(cfg.seed, i, 0)
        positions[i] = _initial_position(cfg, dim, rng)
        velocities[i] = rng.uniform(*cfg.init_velocity_range, dim)
    values = np.array([penalized_objective(x, objective, cfg.penalty) for x in positions])
    return Swarm(positions, velocities, values, positions.copy(), values.copy(), 0)


def step_swarm(swarm, cfg, objective):
    """One synchronous velocity/position update of every particle."""
    step = swarm.iteration + 1
    n, dim = swarm.positions.shape
    g = swarm.global_best_position
    velocities = np.empty_like(swarm.velocities)
    for i in range(n):
        rng = _stream(cfg.seed, i, step)
        shape = (2, dim) if cfg.per_dimension_random else (2, 1)
        r1, r2 = rng.random(shape)
        x = swarm.positions[i]
        v = cfg.chi * (
            swarm.velocities[i]
            + r1 * cfg.c1 * (swarm.best_positions[i] - x)
            + r2 * cfg.c2 * (g - x)
        )
        velocities[i] = np.clip(v, -cfg.v_max, cfg.v_max)
    positions = swarm.positions + velocities
    values = np.array([penalized_objective(x, objective, cfg.penalty) for x in positions])
    improved = values < swarm.best_values
    best_positions = swarm.best_positions.copy()
    best_values = swarm.best_values.copy()
    best_positions[improved] = positions[improved]
    best_values[improved] = values[improved]
    return Swarm(positions, velocities, values, best_positions, best_values, step)


def optimize(cfg, dim, objective=None):
    """Run the swarm for ``cfg.iterations`` steps.

    Returns ``(best_times, best_value, trace)`` where ``best_times`` is the
    ascending schedule of the global best and ``trace`` holds one row per
    swarm state, starting with the initial one.
    """
    if objective is None:
        objective = make_objective("grid", DEFAULT_GRID_SIZE)
    swarm = init_swarm(cfg, dim, objective)
    trace = SwarmTrace()
    trace.record(swarm, cfg.penalty)
    for _ in range(cfg.iterations):
        swarm = step_swarm(swarm, cfg, objective)
        trace.record(swarm, cfg.penalty)
    best = swarm.global_best_position
    if not is_feasible(best) or swarm.global_best_value >= cfg.penalty:
        raise RuntimeError("no feasible schedule was ever visited by the swarm")
    return dt_to_times(best), swarm.global_best_value, trace


class PsoScheduler(BaseEstimator):
    """Estimator-style front end for :func:`optimize`.

    ``init="around_schedule"`` perturbs ``base_schedule`` (or the greedy
    schedule of the same length when it is None) by up to ``radius``.
    """

    def __init__(
        self,
        n_measurements=5,
        swarm_size=16,
        c1=2.05,
        c2=2.05,
        chi=None,
        v_max=2.0,
        penalty=10.0,
        init="range",
        base_schedule=None,
        radius=0.5,
        iterations=200,
        grid_size=DEFAULT_GRID_SIZE,
        per_dimension_random=False,
        random_state=0,
    ):
        self.n_measurements = n_measurements
        self.swarm_size = swarm_size
        self.c1 = c1
        self.c2 = c2
        self.chi = chi
        self.v_max = v_max
        self.penalty = penalty
        self.init = init
        self.base_schedule = base_schedule
        self.radius = radius
        self.iterations = iterations
        self.grid_size = grid_size
        self.per_dimension_random = per_dimension_random
        self.random_state = random_state

    def make_config(self):
        base = self.base_schedule
        if self.init == "around_schedule" and base is None:
            from .lona import lona_schedule

            base = lona_schedule(self.n_measurements).schedule
        return PsoConfig(
            swarm_size=self.swarm_size,
            c1=self.c1,
            c2=self.c2,
            chi=self.chi,
            v_max=self.v_max,
            penalty=self.penalty,
            init=self.init,
            base_schedule=None if base is None else tuple(base),
            radius=self.radius,
            iterations=self.iterations,
            seed=self.random_state,
            per_dimension_random=self.per_dimension_random,
        )

    def fit(self, X=None, y=None):
        cfg = self.make_config()
        objective = make_objective("grid", self.grid_size)
        best, value, trace = optimize(cfg, self.n_measurements, objective)
        self.config_ = cfg
        self.best_schedule_ = best
        self.best_value_ = value
        self.trace_ = trace
        return self

    def score(self, X=None, y=None):
        """Negative expected variance of the best schedule (higher is better)."""
        return -self.best_value_

