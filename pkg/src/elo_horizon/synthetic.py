"""Seeded construction of the two bundled calibration datasets.

The real game logs behind the published 2020-22 and 2019 summary tables
are not public, so the package ships synthetic stand-ins built here. For
each scenario:

1. Draw integer opponent ratings from a clipped normal with a fixed seed,
   and shuffle a fixed multiset of wins, draws and losses onto the games.
2. Give the player a rating before each game by linear interpolation
   between month-level anchor ratings, rounded to whole points.
3. Pin the extreme records. The lowest-rated eligible game of the
   ``min_outcome`` kind gets an opponent exactly ``min_gap`` points below
   the player; likewise the lowest-rated win gets ``max_gap``. With K=10
   these games reproduce the table's min and max once the change is
   rounded to two decimals.
4. Calibrate. Greedy single-point moves of unpinned opponent ratings
   shift the mean and standard deviation (divisor N) of the rounded
   changes until both sit within ``MEAN_TOL`` / ``STD_TOL`` of the table.
   Moves must keep opponents inside ``opp_range`` and every unpinned change
   strictly inside (min, max).

Recorded changes are stored rounded to 0.01, as published rating lists do,
which keeps every record within the loader's 0.01 consistency tolerance.
"""

import datetime as dt
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import GameDataset, GameRecord, write_dataset
from .elo import DEFAULT_PARAMS, GameOutcome, rating_delta

MEAN_TOL = 0.001
STD_TOL = 0.002
K_FACTOR = 10.0


@dataclass(frozen=True)
class Scenario:
    name: str
    seed: int
    wins: int
    draws: int
    losses: int
    opp_mean: float
    opp_sd: float
    opp_range: tuple
    rating_anchors: tuple
    first_date: dt.date
    last_date: dt.date
    target_mean: float
    target_std: float
    target_min: float
    target_max: float
    min_outcome: GameOutcome
    min_gap: int
    max_gap: int

    @property
    def n_games(self):
        return self.wins + self.draws + self.losses


SCENARIOS = {
    "synthetic-2022": Scenario(
        name="synthetic-2022",
        seed=20202022,
        wins=30,
        draws=74,
        losses=6,
        opp_mean=2780.0,
        opp_sd=40.0,
        opp_range=(2650, 2840),
        rating_anchors=(2872, 2863, 2862, 2855, 2865, 2864),
        first_date=dt.date(2020, 1, 11),
        last_date=dt.date(2022, 8, 8),
        target_mean=-0.11,
        target_std=2.67,
        target_min=-7.44,
        target_max=4.5,
        min_outcome=GameOutcome.LOSS,
        min_gap=185,
        max_gap=35,
    ),
    # Unbeaten year: a -2.80 minimum can only be a draw against a much
    # weaker opponent, so the scenario has no losses at all.
    "synthetic-2019": Scenario(
        name="synthetic-2019",
        seed=2019,
        wins=26,
        draws=52,
        losses=0,
        opp_mean=2780.0,
        opp_sd=40.0,
        opp_range=(2600, 2840),
        rating_anchors=(2835, 2845, 2845, 2861, 2875, 2876, 2882, 2872),
        first_date=dt.date(2019, 1, 12),
        last_date=dt.date(2019, 12, 20),
        target_mean=0.48,
        target_std=2.42,
        target_min=-2.8,
        target_max=4.7,
        min_outcome=GameOutcome.DRAW,
        min_gap=220,
        max_gap=21,
    ),
}


def _changes(before, opp, scores):
    return np.round(rating_delta(before, opp, scores, DEFAULT_PARAMS.with_k(K_FACTOR)), 2)


def _repair(sc, before, opp, scores, free):
    # Nudge free records until each change lies strictly inside the table's (min, max).
    lo, hi = sc.opp_range
    while True:
        change = _changes(before, opp, scores)
        too_high = free & (change >= sc.target_max)
        too_low = free & (change <= sc.target_min)
        if not (too_high.any() or too_low.any()):
            return opp
        opp = opp - too_high + too_low
        if opp.min() < lo or opp.max() > hi:
            raise RuntimeError(f"{sc.name}: cannot fit extremes inside the opponent range")


def _calibrate(sc, before, opp, scores, free, max_iter=20000):
    lo, hi = sc.opp_range
    n = opp.size
    change = _changes(before, opp, scores)
    total, total_sq = change.sum(), (change**2).sum()

    def objective(s, q):
        mean = s / n
        std = np.sqrt(np.maximum(q / n - mean**2, 0.0))
        return ((mean - sc.target_mean) / MEAN_TOL) ** 2 + ((std - sc.target_std) / STD_TOL) ** 2

    current = objective(total, total_sq)
    for _ in range(max_iter):
        if current <= 0.5:
            break
        best = None
        for step in (-1.0, 1.0):
            cand_opp = opp + step
            cand = _changes(before, cand_opp, scores)
            ok = free & (cand_opp >= lo) & (cand_opp <= hi) & (cand > sc.target_min) & (cand < sc.target_max)
            s = total - change + cand
            q = total_sq - change**2 + cand**2
            obj = np.where(ok, objective(s, q), np.inf)
            i = int(np.argmin(obj))
            if best is None or obj[i] < best[0]:
                best = (obj[i], i, step, cand[i])
        obj, i, step, new_change = best
        if not obj < current:
            break
        total += new_change - change[i]
        total_sq += new_change**2 - change[i] ** 2
        opp[i] += step
        change[i] = new_change
        current = obj
    return opp, _changes(before, opp, scores)


def build_scenario(sc):
    """Construct one scenario's dataset deterministically."""
    rng = np.random.default_rng(sc.seed)
    n = sc.n_games
    lo, hi = sc.opp_range
    opp = np.clip(np.round(rng.normal(sc.opp_mean, sc.opp_sd, n)), lo, hi)
    scores = np.array([1.0] * sc.wins + [0.5] * sc.draws + [0.0] * sc.losses)
    rng.shuffle(scores)

    anchors = np.asarray(sc.rating_anchors, dtype=float)
    before = np.round(np.interp(np.linspace(0, len(anchors) - 1, n), np.arange(len(anchors)), anchors))

    def lowest_rated(outcome):
        cands = np.flatnonzero(scores == outcome)
        return int(cands[np.argmin(before[cands])])

    i_min = lowest_rated(sc.min_outcome.value)
    i_max = lowest_rated(1.0)
    opp[i_min] = before[i_min] - sc.min_gap
    opp[i_max] = before[i_max] - sc.max_gap
    free = np.ones(n, dtype=bool)
    free[[i_min, i_max]] = False

    change = _changes(before, opp, scores)
    if change[i_min] != sc.target_min or change[i_max] != sc.target_max:
        raise RuntimeError(f"{sc.name}: pinned records do not round to the table extremes")
    opp = _repair(sc, before, opp, scores, free)
    opp, change = _calibrate(sc, before, opp, scores, free)

    span = (sc.last_date - sc.first_date).days
    dates = [sc.first_date + dt.timedelta(days=int(round(d))) for d in np.linspace(0, span, n)]
    records = tuple(
        GameRecord(
            opponent_rating=float(opp[i]),
            outcome=GameOutcome(float(scores[i])),
            player_rating_before=float(before[i]),
            rating_change=float(change[i]),
            date=dates[i],
        )
        for i in range(n)
    )
    return GameDataset(records, label=sc.name, k_factor_used=K_FACTOR)


def build(name):
    try:
        sc = SCENARIOS[name]
    except KeyError:
        raise KeyError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}") from None
    return build_scenario(sc)


def write_all(directory):
    """Regenerate every scenario into ``directory``; returns the written paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name in SCENARIOS:
        path = directory / f"{name}.csv"
        write_dataset(build(name), path)
        paths.append(path)
    return paths
