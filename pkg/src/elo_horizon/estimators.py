"""scikit-learn style wrappers around the forecast and simulation functions.

Both estimators follow the usual conventions: hyperparameters are plain
constructor arguments (so ``get_params``/``set_params``/``clone`` work),
``fit`` learns from data and returns ``self``, and fitted state lives in
trailing-underscore attributes.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .dataset import GameDataset, GameRecord
from .elo import EloParams, GameOutcome
from .forecast import (
    OutcomeProfile,
    endpoint_reach_probability,
    estimate_moments_from_deltas,
    first_passage_probability,
    implied_drift,
)
from .simulate import SimConfig, k_factor_sweep, run_simulation


def _column(X, name):
    arr = check_array(X, ensure_2d=False, dtype=float)
    if arr.ndim == 2:
        if arr.shape[1] != 1:
            raise ValueError(f"{name} must be one-dimensional or a single column, got shape {arr.shape}")
        arr = arr[:, 0]
    return arr


def _horizon_rows(X):
    # Rows of (start_rating, target_rating, horizon_games).
    arr = check_array(X, dtype=float)
    if arr.shape[1] != 3:
        raise ValueError(f"expected columns (start, target, games), got {arr.shape[1]} columns")
    games = arr[:, 2]
    if np.any(games != np.round(games)):
        raise ValueError("horizon_games must be whole numbers")
    return arr


class BrownianRatingForecaster(BaseEstimator):
    """Fit a drifted Brownian motion to per-game rating changes.

    Parameters
    ----------
    ddof : {0, 1}
        Divisor offset for the volatility estimate (0 divides by N).
    first_passage : bool
        When True, :meth:`predict` reports the probability of touching the
        target at any game; otherwise the probability of being above it at
        the horizon.

    Attributes
    ----------
    mu_, sigma_ : float
        Per-game drift and volatility.
    summary_ : SummaryStats
    profile_ : OutcomeProfile or None
        Win/draw/loss profile, available when ``y`` scores were given to fit.
    """

    def __init__(self, ddof=0, first_passage=False):
        self.ddof = ddof
        self.first_passage = first_passage

    def fit(self, X, y=None):
        """``X``: rating changes; ``y``: optional game scores (1, 0.5, 0)."""
        changes = _column(X, "X")
        dv, stats = estimate_moments_from_deltas(changes, ddof=self.ddof)
        self.drift_vol_ = dv
        self.mu_ = dv.mu
        self.sigma_ = dv.sigma
        self.summary_ = stats
        self.profile_ = None if y is None else OutcomeProfile.from_changes(_column(y, "y"), changes)
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        """Probability of reaching the target for each (start, target, games) row."""
        check_is_fitted(self, "drift_vol_")
        fn = first_passage_probability if self.first_passage else endpoint_reach_probability
        rows = _horizon_rows(X)
        return np.array([fn(x0, tgt, self.drift_vol_, int(t)) for x0, tgt, t in rows])

    def implied_drift(self, X, p):
        """Per-game drift giving endpoint probability ``p`` for each row."""
        check_is_fitted(self, "drift_vol_")
        rows = _horizon_rows(X)
        return np.array([implied_drift(x0, tgt, int(t), p, self.sigma_) for x0, tgt, t in rows])


class EloReplaySimulator(BaseEstimator):
    """Monte Carlo replay of historical games from a start rating.

    ``fit`` takes either a :class:`GameDataset`, or opponent ratings ``X``
    with game scores ``y``, runs the simulation and stores the
    :class:`SimResult` as ``result_``.
    """

    def __init__(
        self,
        start_rating=2860.0,
        target_rating=2900.0,
        horizon_games=200,
        n_paths=2000,
        k_factor=10.0,
        odds_base=10.0,
        growth_scale=400.0,
        alpha=1.0,
        seed=0,
        n_sample_trajectories=10,
        n_jobs=1,
    ):
        self.start_rating = start_rating
        self.target_rating = target_rating
        self.horizon_games = horizon_games
        self.n_paths = n_paths
        self.k_factor = k_factor
        self.odds_base = odds_base
        self.growth_scale = growth_scale
        self.alpha = alpha
        self.seed = seed
        self.n_sample_trajectories = n_sample_trajectories
        self.n_jobs = n_jobs

    def _config(self):
        return SimConfig(
            start_rating=self.start_rating,
            target_rating=self.target_rating,
            horizon_games=self.horizon_games,
            n_paths=self.n_paths,
            k_factor=self.k_factor,
            elo_params=EloParams(self.odds_base, self.growth_scale, self.alpha, self.k_factor),
            seed=self.seed,
            n_sample_trajectories=self.n_sample_trajectories,
        )

    @staticmethod
    def _dataset(X, y):
        if isinstance(X, GameDataset):
            return X
        if y is None:
            raise ValueError("y (game scores) is required unless X is a GameDataset")
        opp = _column(X, "X")
        scores = _column(y, "y")
        if opp.shape != scores.shape:
            raise ValueError("X and y must have the same length")
        return GameDataset(tuple(GameRecord(o, GameOutcome.parse(s)) for o, s in zip(opp, scores)))

    def fit(self, X, y=None):
        self.dataset_ = self._dataset(X, y)
        self.config_ = self._config()
        self.result_ = run_simulation(self.config_, self.dataset_, n_jobs=self.n_jobs)
        self.reach_probability_ = self.result_.reach_probability
        self.n_features_in_ = 1
        return self

    def sweep(self, k_values):
        """Re-run the fitted dataset for each K with common random numbers."""
        check_is_fitted(self, "dataset_")
        return k_factor_sweep(self.config_, k_values, self.dataset_, n_jobs=self.n_jobs)
