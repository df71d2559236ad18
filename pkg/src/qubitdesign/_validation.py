"""Input validation helpers shared by the estimators and functional API."""

import numbers

import numpy as np
from sklearn.utils import check_scalar


class EnumerationCapError(ValueError):
    """Raised when exact outcome-tree enumeration would exceed the length cap."""


def check_schedule(times, *, integer=False, allow_empty=True, name="times"):
    """Return ``times`` as a 1-d float array of non-negative evolution times.

    With ``integer=True`` every entry must be a positive whole number.
    """
    arr = np.asarray(times, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not allow_empty and arr.size == 0:
        raise ValueError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    if np.any(arr < 0):
        raise ValueError(f"{name} must be non-negative, got {arr.tolist()}")
    if integer and not is_integer_schedule(arr):
        raise ValueError(f"{name} must be positive integers, got {arr.tolist()}")
    return arr


def is_integer_schedule(times):
    arr = np.asarray(times, dtype=float)
    return bool(np.all(arr >= 1) and np.all(arr == np.round(arr)))


def check_frequency(omega, omega0=1.0):
    arr = np.asarray(omega, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0) or np.any(arr > omega0):
        raise ValueError(f"frequency must lie in [0, {omega0}], got {omega!r}")
    return arr


def check_positive_int(value, name, min_val=1, max_val=None):
    if isinstance(value, (bool, np.bool_)) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    check_scalar(int(value), name, numbers.Integral, min_val=min_val, max_val=max_val)
    return int(value)


def check_cap(n, cap):
    if n > cap:
        raise EnumerationCapError(
            f"schedule length {n} exceeds enumeration cap {cap} (2^{n} branches)"
        )
