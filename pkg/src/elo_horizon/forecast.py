"""Closed-form Brownian-motion analytics for rating trajectories.

A rating is modelled as ``X_t = X_0 + mu * t + sigma * B_t`` with ``t``
counted in games. The helpers here estimate ``(mu, sigma)`` from game
data, give the probability of being above a target at the horizon or of
touching it at any point before, and invert the endpoint probability for
the drift needed to hit a chosen success probability.
"""

import math
import statistics
from dataclasses import dataclass

import numpy as np

from ._validation import check_finite, check_open_probability, check_positive, check_positive_int
from .exceptions import DomainError, ZeroVarianceError

#: Classical games per calendar year used to turn "years" into a horizon.
GAMES_PER_YEAR = 55

_SQRT2 = math.sqrt(2.0)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_STD_NORMAL = statistics.NormalDist()


# -- normal distribution ---------------------------------------------------

def normal_cdf(z):
    """Standard normal CDF, accurate to a few ulps over the whole real line."""
    return 0.5 * math.erfc(-z / _SQRT2)


def normal_pdf(z):
    return math.exp(-0.5 * z * z - _LOG_SQRT_2PI)


def _log_normal_cdf(z):
    if z > -30.0:
        return math.log(normal_cdf(z))
    # Mills-ratio asymptotic series; relative error below 1e-10 past z = -30.
    z2 = z * z
    series = 1.0 - 1.0 / z2 + 3.0 / z2**2 - 15.0 / z2**3 + 105.0 / z2**4
    return -0.5 * z2 - math.log(-z) - _LOG_SQRT_2PI + math.log(series)


def _lower_quantile(p):
    # p <= 0.5: one Newton step on the relative residual of the lower tail.
    x = _STD_NORMAL.inv_cdf(p)
    return x - (normal_cdf(x) - p) / normal_pdf(x)


def normal_quantile(p):
    """Inverse of :func:`normal_cdf` on the open interval (0, 1)."""
    p = check_open_probability(p)
    if p > 0.5:
        # 1 - p is exact here, so the upper tail keeps full precision.
        return -_lower_quantile(1.0 - p)
    return _lower_quantile(p)


# -- moment estimation -----------------------------------------------------

@dataclass(frozen=True)
class OutcomeProfile:
    """Win/draw/loss frequencies and the mean rating change for each result."""

    p_win: float
    p_draw: float
    p_loss: float
    e_win: float
    e_draw: float
    e_loss: float

    def __post_init__(self):
        probs = (self.p_win, self.p_draw, self.p_loss)
        if any(not math.isfinite(p) or p < 0 for p in probs):
            raise DomainError(f"outcome probabilities must be non-negative, got {probs}")
        if abs(math.fsum(probs) - 1.0) > 1e-9:
            raise DomainError(f"outcome probabilities must sum to 1, got {math.fsum(probs)}")
        for name in ("e_win", "e_draw", "e_loss"):
            check_finite(getattr(self, name), name)

    @classmethod
    def from_changes(cls, scores, changes):
        """Build the profile from per-game scores (1/0.5/0) and rating changes.

        Outcomes that never occur get probability 0 and a mean change of 0.
        """
        scores = np.asarray(scores, dtype=float)
        changes = np.asarray(changes, dtype=float)
        if scores.shape != changes.shape or scores.size == 0:
            raise DomainError("scores and changes must be non-empty and aligned")
        n = scores.size
        fields = {}
        for suffix, value in (("win", 1.0), ("draw", 0.5), ("loss", 0.0)):
            mask = scores == value
            count = int(mask.sum())
            fields["p_" + suffix] = count / n
            fields["e_" + suffix] = float(changes[mask].mean()) if count else 0.0
        return cls(**fields)


@dataclass(frozen=True)
class DriftVol:
    """Per-game drift ``mu`` and volatility ``sigma`` of a rating."""

    mu: float
    sigma: float

    def __post_init__(self):
        check_finite(self.mu, "mu")
        check_positive(self.sigma, "sigma")


@dataclass(frozen=True)
class SummaryStats:
    n: int
    mean: float
    std: float
    min: float
    max: float

    def as_dict(self):
        return {"N": self.n, "mu": self.mean, "sigma": self.std, "min": self.min, "max": self.max}


def summary_stats(values, ddof=0):
    """N, mean, standard deviation, min and max of ``values``.

    ``ddof=0`` divides by N (the moment estimator); ``ddof=1`` gives the
    unbiased sample variance.
    """
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError("need a non-empty one-dimensional sequence of values")
    if arr.size <= ddof:
        raise DomainError(f"need more than {ddof} values for ddof={ddof}")
    check_finite(arr, "values")
    mean = math.fsum(arr) / arr.size
    var = math.fsum((arr - mean) ** 2) / (arr.size - ddof)
    return SummaryStats(int(arr.size), mean, math.sqrt(var), float(arr.min()), float(arr.max()))


def estimate_moments(profile):
    """Drift and volatility implied by a win/draw/loss profile."""
    p = (profile.p_win, profile.p_draw, profile.p_loss)
    e = (profile.e_win, profile.e_draw, profile.e_loss)
    mu = math.fsum(pi * ei for pi, ei in zip(p, e))
    var = math.fsum(pi * ei * ei for pi, ei in zip(p, e)) - mu * mu
    # Cancellation leaves a few ulps of positive noise on point masses.
    if var <= 1e-12 * max(1.0, mu * mu):
        raise ZeroVarianceError("outcome profile has zero variance")
    return DriftVol(mu, math.sqrt(var))


def estimate_moments_from_deltas(deltas, ddof=0):
    """Drift, volatility and summary statistics of observed rating changes.

    Returns:
        ``(DriftVol, SummaryStats)``.

    Raises:
        DomainError: fewer than two values.
        ZeroVarianceError: all values identical.
    """
    deltas = list(deltas)
    if len(deltas) < 2:
        raise DomainError("need at least two rating changes")
    stats = summary_stats(deltas, ddof=ddof)
    if stats.std == 0.0:
        raise ZeroVarianceError("all rating changes are identical")
    return DriftVol(stats.mean, stats.std), stats


# -- probabilities ---------------------------------------------------------

def _gap(x0, target):
    check_finite(x0, "x0")
    check_finite(target, "target")
    gap = float(target) - float(x0)
    if gap <= 0:
        raise DomainError(f"target ({target}) must be above the start rating ({x0})")
    return gap


def endpoint_reach_probability(x0, target, dv, horizon):
    """P(X_T > target | X_0 = x0) for ``horizon`` games."""
    gap = _gap(x0, target)
    t = check_positive_int(horizon, "horizon")
    z = (gap - dv.mu * t) / (dv.sigma * math.sqrt(t))
    return normal_cdf(-z)


def first_passage_probability(x0, target, dv, horizon):
    """P(max over [0, T] of X_t >= target | X_0 = x0), by the reflection identity."""
    gap = _gap(x0, target)
    t = check_positive_int(horizon, "horizon")
    scale = dv.sigma * math.sqrt(t)
    direct = normal_cdf((dv.mu * t - gap) / scale)
    log_reflected = 2.0 * dv.mu * gap / dv.sigma**2 + _log_normal_cdf((-gap - dv.mu * t) / scale)
    reflected = math.exp(log_reflected) if log_reflected > -745.0 else 0.0
    return min(1.0, direct + reflected)


def implied_drift(x0, target, horizon, p, sigma):
    """Per-game drift that makes :func:`endpoint_reach_probability` equal ``p``."""
    gap = _gap(x0, target)
    t = check_positive_int(horizon, "horizon")
    p = check_open_probability(p)
    sigma = check_positive(sigma, "sigma")
    return gap / t - normal_quantile(1.0 - p) * sigma / math.sqrt(t)


def games_for_years(years):
    """Horizon in games for a span of calendar years."""
    return check_positive_int(round(years * GAMES_PER_YEAR), "horizon")
