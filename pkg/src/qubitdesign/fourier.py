"""Exact cosine-series posterior for integer evolution times.

Starting from a flat prior, every likelihood factor

    p(+/-|omega) = (1 -/+ cos(m pi omega / omega0)) / 2

is a trigonometric polynomial, so the unnormalized posterior after ``k``
measurements is exactly

    U(omega) = sum_{q=0}^{M} a[q] cos(q pi omega / omega0),   M = m_1 + ... + m_k.

The constant term is stored as ``a[0]`` directly (a plain cosine sum), so
``a[0] = c(0) / 2`` relative to the convention with a halved leading term.
The integral of ``U`` over ``[0, omega0]`` is ``omega0 * a[0]``; with the
flat prior folded in it equals the marginal probability of the outcomes.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_frequency, check_positive_int
from .model import Outcome

__all__ = ["FourierPosterior"]


def multiply_cosine(a, m):
    """Coefficients of ``U(omega) * cos(m pi omega / omega0)`` along the last axis.

    Uses cos(q)cos(m) = [cos(q+m) + cos(|q-m|)] / 2; the bandwidth grows by m.
    """
    M = a.shape[-1] - 1
    c = np.zeros(a.shape[:-1] + (M + m + 1,))
    # q -> q + m
    c[..., m:] += 0.5 * a
    # q -> q - m, for q >= m
    if M >= m:
        c[..., : M - m + 1] += 0.5 * a[..., m:]
    # q -> m - q, for 0 <= q < m (q = m already counted above, as n = 0)
    lo = max(1, m - M)
    c[..., lo : m + 1] += 0.5 * a[..., m - lo :: -1][..., : m + 1 - lo]
    return c


def update_coeffs(a, m, sign):
    """Multiply by ``(1 - sign cos(m pi omega/omega0)) / 2`` along the last axis.

    ``sign`` is +1 for PLUS and -1 for MINUS; an array of shape ``a.shape[:-1]``
    applies a different outcome to each row.
    """
    out = -0.5 * np.asarray(sign, dtype=float)[..., None] * multiply_cosine(a, m)
    out[..., : a.shape[-1]] += 0.5 * a
    return out


def raw_moments(a, omega0=1.0):
    """Unnormalized moments (mass, first, second) along the last axis.

    Term-wise integration of cos(q pi u) against 1, u and u^2 on [0, 1]
    gives 0, ((-1)^q - 1)/(q pi)^2 and 2 (-1)^q/(q pi)^2 respectively.
    """
    a = np.asarray(a, dtype=float)
    a0 = a[..., 0]
    mass = omega0 * a0
    if a.shape[-1] == 1:
        return mass, mass * omega0 / 2.0, mass * omega0**2 / 3.0
    q = np.arange(1, a.shape[-1], dtype=float)
    alt = np.where(q % 2 == 0, 1.0, -1.0)
    sq = (q * np.pi) ** 2
    rest = a[..., 1:]
    first = omega0**2 * (a0 / 2.0 + rest @ ((alt - 1.0) / sq))
    second = omega0**3 * (a0 / 3.0 + rest @ (2.0 * alt / sq))
    return mass, first, second


def normalized_moments(a, omega0=1.0):
    """Posterior (mean, second moment, variance) along the last axis."""
    mass, first, second = raw_moments(a, omega0)
    mean = first / mass
    m2 = second / mass
    return mean, m2, m2 - mean**2


@dataclass(frozen=True, eq=False)
class FourierPosterior:
    """Unnormalized posterior ``U(omega) = sum a[q] cos(q pi omega / omega0)``.

    Instances are immutable; :meth:`update` returns a new posterior.
    """

    coeffs: np.ndarray
    measurement_count: int = 0
    omega0: float = 1.0

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float).reshape(-1)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def flat(cls, omega0=1.0):
        return cls(np.array([1.0 / omega0]), 0, omega0)

    @property
    def bandwidth(self):
        return self.coeffs.size - 1

    def update(self, m, outcome):
        """Condition on ``outcome`` observed after integer evolution time ``m``."""
        if isinstance(m, (float, np.floating)) and float(m).is_integer():
            m = int(m)
        m = check_positive_int(m, "m")
        outcome = Outcome.coerce(outcome)
        coeffs = update_coeffs(self.coeffs, m, outcome.sign)
        return FourierPosterior(coeffs, self.measurement_count + 1, self.omega0)

    def evaluate(self, omega):
        omega = check_frequency(omega, self.omega0)
        q = np.arange(self.coeffs.size)
        u = np.cos(np.multiply.outer(omega, q) * np.pi / self.omega0) @ self.coeffs
        return u if np.ndim(u) else float(u)

    def total_mass(self):
        return float(self.omega0 * self.coeffs[0])

    def moments(self):
        """Return ``(mean, second_moment, variance)`` of the normalized posterior."""
        if self.total_mass() <= 0:
            raise ValueError("posterior has non-positive total mass")
        if self.coeffs.size == 1:
            w0 = self.omega0
            return w0 / 2.0, w0**2 / 3.0, w0**2 / 12.0
        mean, m2, var = normalized_moments(self.coeffs, self.omega0)
        return float(mean), float(m2), float(var)
