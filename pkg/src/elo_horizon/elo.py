"""Elo rating arithmetic.

All functions accept plain floats and also broadcast over numpy arrays, so
the Monte Carlo engine steps thousands of paths through the very same code
that scores a single game.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_finite, check_positive
from .exceptions import DomainError

#: Logistic adjustment Glickman fitted for players rated 1400-1600.
GLICKMAN_ALPHA_1400_1600 = 0.59
#: Logistic adjustment Glickman fitted for players rated 2200-2700.
GLICKMAN_ALPHA_2200_2700 = 0.95


class GameOutcome(float, enum.Enum):
    """Result of a game from the rated player's point of view."""

    WIN = 1.0
    DRAW = 0.5
    LOSS = 0.0

    @classmethod
    def parse(cls, value):
        """Map ``1``/``0.5``/``0`` (numbers or strings) or a name onto an outcome."""
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            text = value.strip()
            if text.upper() in cls.__members__:
                return cls[text.upper()]
            try:
                value = float(text)
            except ValueError:
                raise DomainError(f"unrecognised game outcome {value!r}") from None
        try:
            return cls(float(value))
        except (ValueError, TypeError):
            raise DomainError(
                f"game outcome must be one of 1, 0.5, 0; got {value!r}"
            ) from None


@dataclass(frozen=True)
class EloParams:
    """System constants of an Elo pool.

    ``odds_base`` and ``growth_scale`` fix the logistic curve: a rating gap of
    ``growth_scale`` points corresponds to odds of ``odds_base`` to one.
    ``alpha`` multiplies the exponent. ``k_factor`` is the update step, in
    rating points per unit of score surprise. The defaults are FIDE's
    values for grandmasters.
    """

    odds_base: float = 10.0
    growth_scale: float = 400.0
    alpha: float = 1.0
    k_factor: float = 10.0

    def __post_init__(self):
        for name in ("odds_base", "growth_scale", "alpha", "k_factor"):
            object.__setattr__(self, name, check_positive(getattr(self, name), name))
        if self.odds_base <= 1.0:
            raise DomainError(f"odds_base must exceed 1, got {self.odds_base!r}")

    def with_k(self, k_factor):
        return EloParams(self.odds_base, self.growth_scale, self.alpha, k_factor)


DEFAULT_PARAMS = EloParams()


def _as_score(outcome):
    if isinstance(outcome, GameOutcome):
        return outcome.value
    if np.ndim(outcome) == 0:
        return GameOutcome.parse(outcome).value
    scores = np.asarray(outcome, dtype=float)
    ok = (scores == 0.0) | (scores == 0.5) | (scores == 1.0)
    if not np.all(ok):
        raise DomainError("game outcomes must be 1, 0.5 or 0")
    return scores


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def odds(r_a, r_b, params=DEFAULT_PARAMS):
    """Odds that A beats B, ``odds_base ** (alpha * (r_a - r_b) / growth_scale)``."""
    check_finite(r_a, "r_a")
    check_finite(r_b, "r_b")
    diff = np.subtract(r_a, r_b, dtype=float)
    return _scalar_or_array(np.power(params.odds_base, params.alpha * diff / params.growth_scale))


def expected_score(r_a, r_b, params=DEFAULT_PARAMS):
    """Expected score of a player rated ``r_a`` against one rated ``r_b``.

    >>> round(expected_score(2600, 2200), 6)
    0.909091
    """
    check_finite(r_a, "r_a")
    check_finite(r_b, "r_b")
    diff = np.subtract(r_a, r_b, dtype=float)
    exponent = -params.alpha * diff / params.growth_scale
    return _scalar_or_array(1.0 / (1.0 + np.power(params.odds_base, exponent)))


def rating_delta(r_player, r_opponent, outcome, params=DEFAULT_PARAMS):
    """Rating change ``K * (S - P)`` for one game."""
    score = _as_score(outcome)
    p = expected_score(r_player, r_opponent, params)
    return _scalar_or_array(params.k_factor * (score - p))


def update_rating(r_player, r_opponent, outcome, params=DEFAULT_PARAMS):
    """Rating after one game. No rounding is applied."""
    return _scalar_or_array(np.add(r_player, rating_delta(r_player, r_opponent, outcome, params)))


def apply_tournament(r_player, games, params=DEFAULT_PARAMS):
    """Apply a whole event's games at once.

    Every game is scored against the pre-event rating ``r_player``, so the
    result does not depend on the order of ``games``. For game-by-game
    updating chain :func:`update_rating` instead.

    Args:
        r_player: Rating before the event.
        games: Sequence of ``(opponent_rating, outcome)`` pairs.
        params: Pool constants.
    """
    games = list(games)
    if not games:
        raise DomainError("a tournament needs at least one game")
    check_finite(r_player, "r_player")
    deltas = [rating_delta(r_player, opp, outcome, params) for opp, outcome in games]
    return float(r_player) + math.fsum(deltas)
