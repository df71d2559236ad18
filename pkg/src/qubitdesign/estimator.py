import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_schedule, is_integer_schedule
from .fourier import FourierPosterior
from .grid import DEFAULT_GRID_SIZE, GridPosterior
from .model import Outcome

__all__ = ["FrequencyEstimator"]


def _as_times(X):
    X = np.asarray(X, dtype=float)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(f"expected a single column of evolution times, got shape {X.shape}")
        X = X[:, 0]
    return check_schedule(X, name="X")


class FrequencyEstimator(ClassifierMixin, BaseEstimator):
    """Bayesian frequency estimate from (evolution time, outcome) pairs.

    ``X`` holds evolution times and ``y`` the observed outcomes ("+"/"-",
    booleans or :class:`Outcome`). Fitting multiplies a flat prior by each
    likelihood factor; the posterior mean and variance are exposed as
    ``mean_`` and ``variance_``. ``predict_proba`` gives the posterior
    predictive outcome distribution for new evolution times, with columns
    ordered as ``classes_ == ["-", "+"]``.

    With ``engine="auto"`` the exact cosine-series posterior is used while all
    times are integers, switching to the grid on the first non-integer time.
    """

    def __init__(self, engine="auto", grid_size=DEFAULT_GRID_SIZE, omega0=1.0):
        self.engine = engine
        self.grid_size = grid_size
        self.omega0 = omega0

    def fit(self, X, y):
        for attr in ("posterior_", "mean_", "variance_", "n_measurements_"):
            self.__dict__.pop(attr, None)
        return self.partial_fit(X, y)

    def partial_fit(self, X, y):
        times = _as_times(X)
        outcomes = [Outcome.coerce(v) for v in np.atleast_1d(np.asarray(y, dtype=object))]
        if len(outcomes) != times.size:
            raise ValueError(f"X has {times.size} times but y has {len(outcomes)} outcomes")
        if self.engine not in ("auto", "fourier", "grid"):
            raise ValueError(f"unknown engine {self.engine!r}")
        posterior = getattr(self, "posterior_", None)
        if posterior is None:
            if self.engine == "grid":
                posterior = GridPosterior.flat(self.grid_size, self.omega0)
            else:
                posterior = FourierPosterior.flat(self.omega0)
        for t, outcome in zip(times, outcomes):
            posterior = self._update(posterior, t, outcome)
        self.posterior_ = posterior
        self.n_measurements_ = getattr(self, "n_measurements_", 0) + times.size
        self.classes_ = np.array(["-", "+"])
        self.mean_, _, self.variance_ = posterior.moments()
        return self

    def _update(self, posterior, t, outcome):
        if isinstance(posterior, FourierPosterior):
            if is_integer_schedule([t]):
                return posterior.update(int(t), outcome)
            if self.engine == "fourier":
                raise ValueError(f"the fourier engine requires positive integer times, got {t}")
            posterior = self._to_grid(posterior)
        return posterior.update(t, outcome)

    def _to_grid(self, posterior):
        w = (np.arange(self.grid_size) + 0.5) * (self.omega0 / self.grid_size)
        # the series is non-negative up to rounding
        return GridPosterior(np.clip(posterior.evaluate(w), 0.0, None), self.omega0)

    def predict_proba(self, X):
        check_is_fitted(self, "posterior_")
        times = _as_times(X)
        mass = self.posterior_.total_mass()
        proba = np.empty((times.size, 2))
        for i, t in enumerate(times):
            p_plus = self._update(self.posterior_, t, Outcome.PLUS).total_mass() / mass
            proba[i] = (1.0 - p_plus, p_plus)
        return proba

    def predict(self, X):
        return self.classes_[np.argmax(self.predict_proba(X), axis=1)]
