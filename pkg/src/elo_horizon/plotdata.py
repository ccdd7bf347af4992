"""Numbers behind the figures: histograms and trajectory tables as CSV."""

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .elo import expected_score
from .exceptions import DomainError


@dataclass(frozen=True)
class Histogram:
    bin_edges: tuple
    counts: tuple

    def __post_init__(self):
        if len(self.bin_edges) != len(self.counts) + 1:
            raise DomainError("a histogram needs exactly one more edge than counts")
        if any(b <= a for a, b in zip(self.bin_edges, self.bin_edges[1:])):
            raise DomainError("bin edges must be strictly increasing")

    @property
    def total(self):
        return sum(self.counts)

    def rows(self):
        return [(lo, hi, c) for lo, hi, c in zip(self.bin_edges, self.bin_edges[1:], self.counts)]

    def as_dict(self):
        return {"bin_edges": list(self.bin_edges), "counts": list(self.counts)}


def make_histogram(values, bin_width, origin=0.0, span=None):
    """Fixed-width histogram with bin edges at ``origin + k * bin_width``.

    Bins are left-closed and right-open, and just enough of them are used to
    cover ``[min(values), max(values)]``. Passing ``span=(lo, hi)`` fixes the
    covered range instead so that histograms of different samples share
    edges; values outside it are not counted.
    """
    if not (math.isfinite(bin_width) and bin_width > 0):
        raise DomainError(f"bin_width must be positive, got {bin_width!r}")
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise DomainError("cannot histogram an empty sequence")
    lo, hi = (values.min(), values.max()) if span is None else span
    k_lo = math.floor((lo - origin) / bin_width)
    k_hi = math.floor((hi - origin) / bin_width) + 1
    index = np.floor((values - origin) / bin_width).astype(np.int64) - k_lo
    n_bins = k_hi - k_lo
    index = index[(index >= 0) & (index < n_bins)]
    counts = np.bincount(index, minlength=n_bins)
    edges = tuple(float(origin + k * bin_width) for k in range(k_lo, k_hi + 1))
    return Histogram(edges, tuple(int(c) for c in counts))


def write_histogram_csv(hist, path, value_name="value"):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"{value_name}_from", f"{value_name}_to", "count"])
        writer.writerows(hist.rows())


def write_trajectories_csv(result, path):
    """Game index, cross-path mean, then each retained sample path."""
    samples = result.sample_trajectories
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["game", "mean"] + [f"path_{i}" for i in range(len(samples))])
        for g, mean in enumerate(result.mean_trajectory):
            writer.writerow([g, mean] + [s[g] for s in samples])


def write_outcomes_csv(dataset, path, params):
    """Actual score next to the Elo-expected score for every historical game."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["game", "opponent_rating", "score", "expected_score"])
        for i, rec in enumerate(dataset, start=1):
            expected = (
                expected_score(rec.player_rating_before, rec.opponent_rating, params)
                if rec.player_rating_before is not None
                else ""
            )
            writer.writerow([i, rec.opponent_rating, rec.outcome.value, expected])


def dataset_histograms(dataset, change_width=1.0, opponent_width=25.0):
    return {
        "rating_change": make_histogram(dataset.rating_changes(), change_width, origin=0.0),
        "opponent_rating": make_histogram(dataset.opponent_ratings, opponent_width, origin=0.0),
    }


def first_passage_histogram(result, bin_width=10):
    """Histogram of first-touch game indices; None when no path reached the target."""
    if not result.first_passage_games:
        return None
    return make_histogram(result.first_passage_games, bin_width, origin=1.0)


def ensure_dir(path):
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path
