"""Small argument checks used across the public functions."""

import math

import numpy as np

from .exceptions import DomainError


def check_finite(value, name):
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def check_positive(value, name):
    if not (isinstance(value, (int, float, np.integer, np.floating)) and math.isfinite(value)):
        raise DomainError(f"{name} must be a finite number, got {value!r}")
    if value <= 0:
        raise DomainError(f"{name} must be positive, got {value!r}")
    return float(value)


def check_positive_int(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    if value < 1:
        raise DomainError(f"{name} must be >= 1, got {value!r}")
    return int(value)


def check_open_probability(p, name="p"):
    if not (isinstance(p, (int, float, np.floating)) and 0.0 < p < 1.0):
        raise DomainError(f"{name} must lie strictly between 0 and 1, got {p!r}")
    return float(p)
