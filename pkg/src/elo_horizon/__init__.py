"""Elo rating arithmetic, Brownian-motion rating forecasts and Monte Carlo
replay of historical games."""

__version__ = "0.1.0"

from .dataset import GameDataset, GameRecord, load_dataset, write_dataset
from .elo import (
    DEFAULT_PARAMS,
    EloParams,
    GameOutcome,
    apply_tournament,
    expected_score,
    odds,
    rating_delta,
    update_rating,
)
from .estimators import BrownianRatingForecaster, EloReplaySimulator
from .exceptions import DatasetError, DomainError, ZeroVarianceError
from .forecast import (
    DriftVol,
    OutcomeProfile,
    SummaryStats,
    endpoint_reach_probability,
    estimate_moments,
    estimate_moments_from_deltas,
    first_passage_probability,
    implied_drift,
    normal_cdf,
    normal_quantile,
)
from .plotdata import Histogram, make_histogram
from .simulate import (
    SimConfig,
    SimResult,
    k_factor_sweep,
    resample_game,
    run_simulation,
    simulate_path,
    summarize_dataset,
)
