"""Monte Carlo replay of historical games against an evolving rating.

Each simulated game draws one historical ``(opponent, outcome)`` record
uniformly at random and applies the ordinary Elo update against the
*current* simulated rating. Because the expected score rises with the
rating, gains per win shrink and losses per draw grow as the player climbs,
which is the source of mean reversion in these paths.

Random streams
--------------
Path ``i`` of a run seeded with ``seed`` uses its own PCG64 generator built
from ``numpy.random.SeedSequence(seed, spawn_key=(i,))``. A path's game
sequence therefore depends only on ``(seed, i)``: results are identical
however the paths are split across workers, and runs that differ only in K
replay the same games (common random numbers).
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from ._validation import check_finite, check_positive, check_positive_int
from .elo import DEFAULT_PARAMS, EloParams, update_rating
from .exceptions import DomainError
from .forecast import summary_stats

#: Paths per work unit. Fixed so that aggregation order never depends on n_jobs.
CHUNK_SIZE = 512


@dataclass(frozen=True)
class SimConfig:
    start_rating: float = 2860.0
    target_rating: float = 2900.0
    horizon_games: int = 200
    n_paths: int = 2000
    k_factor: float = 10.0
    elo_params: EloParams = DEFAULT_PARAMS
    seed: int = 0
    n_sample_trajectories: int = 10

    def __post_init__(self):
        check_finite(self.start_rating, "start_rating")
        check_finite(self.target_rating, "target_rating")
        if self.target_rating <= self.start_rating:
            raise DomainError("target_rating must exceed start_rating")
        check_positive_int(self.horizon_games, "horizon_games")
        check_positive_int(self.n_paths, "n_paths")
        check_positive(self.k_factor, "k_factor")
        if isinstance(self.seed, bool) or not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.n_sample_trajectories < 0:
            raise DomainError("n_sample_trajectories must be non-negative")

    @property
    def params(self):
        """Pool constants with this run's K-factor."""
        return self.elo_params.with_k(self.k_factor)


@dataclass(frozen=True)
class SimResult:
    config: SimConfig
    reach_count: int
    first_passage_games: tuple
    mean_trajectory: tuple
    sample_trajectories: tuple = field(repr=False)

    @property
    def n_paths(self):
        return self.config.n_paths

    @property
    def reach_probability(self):
        return self.reach_count / self.config.n_paths

    @property
    def standard_error(self):
        p = self.reach_probability
        return math.sqrt(p * (1.0 - p) / self.config.n_paths)


def path_rng(seed, path_index):
    """Generator for one simulated path."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(path_index,))))


def resample_game(dataset, rng):
    """Draw one whole record, uniformly, from ``dataset``."""
    return dataset.records[rng.integers(len(dataset))]


def simulate_path(config, dataset, rng):
    """Replay ``horizon_games`` resampled games from ``start_rating``.

    Returns:
        ``(trajectory, first_passage)`` where ``trajectory`` has
        ``horizon_games + 1`` ratings and ``first_passage`` is the 1-based
        game at which the target was first reached, or None.
    """
    params = config.params
    rating = float(config.start_rating)
    trajectory = [rating]
    first_passage: Optional[int] = None
    for game in range(1, config.horizon_games + 1):
        rec = resample_game(dataset, rng)
        rating = update_rating(rating, rec.opponent_rating, rec.outcome, params)
        trajectory.append(rating)
        if first_passage is None and rating >= config.target_rating:
            first_passage = game
    return trajectory, first_passage


def _game_indices(config, n_records, lo, hi):
    idx = np.empty((hi - lo, config.horizon_games), dtype=np.intp)
    for row, path in enumerate(range(lo, hi)):
        idx[row] = path_rng(config.seed, path).integers(0, n_records, size=config.horizon_games)
    return idx


def _run_chunk(config, dataset, lo, hi):
    idx = _game_indices(config, len(dataset), lo, hi)
    opp = dataset.opponent_ratings
    score = dataset.scores
    params = config.params
    n = hi - lo
    n_keep = max(0, min(config.n_sample_trajectories, hi) - lo)

    rating = np.full(n, float(config.start_rating))
    first = np.zeros(n, dtype=np.int64)
    col_sums = np.empty(config.horizon_games + 1)
    col_sums[0] = rating.sum()
    kept = np.empty((n_keep, config.horizon_games + 1))
    kept[:, 0] = rating[:n_keep]
    for g in range(1, config.horizon_games + 1):
        pick = idx[:, g - 1]
        rating = update_rating(rating, opp[pick], score[pick], params)
        first[(first == 0) & (rating >= config.target_rating)] = g
        col_sums[g] = rating.sum()
        kept[:, g] = rating[:n_keep]
    return first, col_sums, kept


def run_simulation(config, dataset, n_jobs=1):
    """Simulate ``config.n_paths`` independent paths and aggregate them.

    ``n_jobs`` spreads fixed-size chunks of paths over worker threads
    (``-1`` for all cores); the output is bit-identical for every value.
    """
    if n_jobs == -1:
        n_jobs = os.cpu_count() or 1
    n_jobs = check_positive_int(n_jobs, "n_jobs")
    bounds = [(lo, min(lo + CHUNK_SIZE, config.n_paths)) for lo in range(0, config.n_paths, CHUNK_SIZE)]
    if n_jobs == 1:
        parts = [_run_chunk(config, dataset, lo, hi) for lo, hi in bounds]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            parts = list(pool.map(lambda b: _run_chunk(config, dataset, *b), bounds))

    total = np.zeros(config.horizon_games + 1)
    for _, col_sums, _ in parts:
        total += col_sums
    mean = total / config.n_paths
    mean[0] = config.start_rating
    first = np.concatenate([f for f, _, _ in parts])
    kept = np.concatenate([k for _, _, k in parts])
    reached = first[first > 0]
    return SimResult(
        config=config,
        reach_count=int(reached.size),
        first_passage_games=tuple(int(g) for g in reached),
        mean_trajectory=tuple(float(x) for x in mean),
        sample_trajectories=tuple(tuple(float(x) for x in row) for row in kept),
    )


def k_factor_sweep(base_config, k_values, dataset, n_jobs=1):
    """Run one simulation per K with common random numbers."""
    k_values = list(k_values)
    if not k_values:
        raise DomainError("k_values must not be empty")
    return [(float(k), run_simulation(replace(base_config, k_factor=k), dataset, n_jobs)) for k in k_values]


def summarize_dataset(dataset, ddof=0):
    """N, mean, standard deviation, min and max of per-game rating changes."""
    return summary_stats(dataset.rating_changes(), ddof=ddof)
