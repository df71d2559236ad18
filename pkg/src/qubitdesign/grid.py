"""Grid-sampled posterior for arbitrary real evolution times.

Values are stored on the cell midpoints ``(j + 1/2) omega0 / G`` and
integrated with the midpoint rule, which keeps every weight positive and
never samples the endpoints where one branch likelihood vanishes.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._validation import check_positive_int
from .model import Outcome

__all__ = ["GridPosterior", "midpoints", "DEFAULT_GRID_SIZE"]

DEFAULT_GRID_SIZE = 10_000


@lru_cache(maxsize=16)
def _unit_midpoints(G):
    w = (np.arange(G) + 0.5) / G
    w.setflags(write=False)
    return w


def midpoints(G, omega0=1.0):
    return omega0 * _unit_midpoints(G)


def plus_probability(t, omega, omega0=1.0):
    return np.sin(np.pi * t * omega / (2.0 * omega0)) ** 2


@dataclass(frozen=True, eq=False)
class GridPosterior:
    values: np.ndarray
    omega0: float = 1.0

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if values.size < 2:
            raise ValueError("grid posterior needs at least 2 points")
        if np.any(values < 0):
            raise ValueError("grid posterior values must be non-negative")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def flat(cls, G=DEFAULT_GRID_SIZE, omega0=1.0):
        G = check_positive_int(G, "G", min_val=2)
        return cls(np.full(G, 1.0 / omega0), omega0)

    @property
    def size(self):
        return self.values.size

    @property
    def omegas(self):
        return midpoints(self.size, self.omega0)

    def update(self, t, outcome):
        t = float(t)
        if t < 0:
            raise ValueError(f"evolution time must be non-negative, got {t}")
        outcome = Outcome.coerce(outcome)
        p = plus_probability(t, self.omegas, self.omega0)
        if outcome is Outcome.MINUS:
            p = np.cos(np.pi * t * self.omegas / (2.0 * self.omega0)) ** 2
        return GridPosterior(self.values * p, self.omega0)

    def total_mass(self):
        return float(self.values.sum() * (self.omega0 / self.size))

    def moments(self):
        """Midpoint-rule ``(mean, second_moment, variance)`` of the normalized grid."""
        mass = self.values.sum()
        if not mass > 0:
            raise ValueError("grid posterior has zero total mass")
        w = self.omegas
        mean = (self.values @ w) / mass
        m2 = (self.values @ (w * w)) / mass
        return float(mean), float(m2), float(m2 - mean**2)
