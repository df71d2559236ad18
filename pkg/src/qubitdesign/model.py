"""Measurement model for a single qubit precessing at an unknown frequency.

Frequencies live in ``[0, omega0]`` and evolution times are measured in
units of the minimal time step, so that ``omega0 = pi / dt = 1`` in the
default dimensionless units. A projective measurement after time ``t``
returns ``+`` with probability ``sin^2(pi t omega / (2 omega0))``.
"""

import enum

import numpy as np

from ._validation import check_frequency

__all__ = [
    "Outcome",
    "outcome_probability",
    "dt_to_times",
    "times_to_dt",
    "is_feasible",
]


class Outcome(enum.Enum):
    PLUS = "+"
    MINUS = "-"

    @classmethod
    def coerce(cls, value):
        """Accept an Outcome, a ``"+"``/``"-"`` string or a bool (True is PLUS)."""
        if isinstance(value, cls):
            return value
        if isinstance(value, (bool, np.bool_)):
            return cls.PLUS if value else cls.MINUS
        if isinstance(value, str):
            v = value.strip().lower()
            if v in ("+", "plus", "p", "1"):
                return cls.PLUS
            if v in ("-", "minus", "m", "0"):
                return cls.MINUS
        raise ValueError(f"cannot interpret {value!r} as a measurement outcome")

    @property
    def sign(self):
        """+1 for PLUS, -1 for MINUS."""
        return 1.0 if self is Outcome.PLUS else -1.0


def outcome_probability(t, omega, outcome, omega0=1.0):
    """Probability of ``outcome`` after evolving for time ``t`` at frequency ``omega``.

    ``t`` and ``omega`` broadcast against each other.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError(f"evolution time must be non-negative, got {t!r}")
    omega = check_frequency(omega, omega0)
    outcome = Outcome.coerce(outcome)
    phase = np.pi * t * omega / (2.0 * omega0)
    if outcome is Outcome.PLUS:
        p = np.sin(phase) ** 2
    else:
        p = np.cos(phase) ** 2
    return p if p.ndim else float(p)


def dt_to_times(dts):
    """Cumulative sum of increments; infeasible (negative) increments pass through."""
    return np.cumsum(np.asarray(dts, dtype=float))


def times_to_dt(times):
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times_to_dt requires a non-empty one-dimensional schedule")
    return np.diff(times, prepend=0.0)


def is_feasible(dts):
    # zero increments are repeated measurement times, which are allowed
    return bool(np.all(np.asarray(dts, dtype=float) >= 0))
