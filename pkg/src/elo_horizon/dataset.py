"""Historical game records and their delimited-text file format.

A dataset file has the header::

    date,opponent_rating,outcome,player_rating_before,rating_change

``outcome`` is ``1``, ``0.5`` or ``0`` from the rated player's side. ``date``,
``player_rating_before`` and ``rating_change`` may be left empty. When both
of the last two are present, the recorded change must agree with the Elo
formula to within :data:`CHANGE_TOLERANCE` points.
"""

import csv
import datetime as dt
import io
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from .elo import DEFAULT_PARAMS, GameOutcome, rating_delta
from .exceptions import (
    DatasetError,
    DatasetNotFoundError,
    DomainError,
    FieldParseError,
    HeaderError,
    InconsistentRatingChangeError,
    MissingRatingChangeError,
    OutcomeError,
)

HEADER = ("date", "opponent_rating", "outcome", "player_rating_before", "rating_change")
CHANGE_TOLERANCE = 0.01
BUNDLED = ("synthetic-2022", "synthetic-2019")
_DELIMITERS = {"csv": ",", "tsv": "\t"}


@dataclass(frozen=True)
class GameRecord:
    opponent_rating: float
    outcome: GameOutcome
    player_rating_before: Optional[float] = None
    rating_change: Optional[float] = None
    date: Optional[dt.date] = None

    def __post_init__(self):
        object.__setattr__(self, "outcome", GameOutcome.parse(self.outcome))
        for name in ("opponent_rating", "player_rating_before", "rating_change"):
            value = getattr(self, name)
            if value is None:
                continue
            value = float(value)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    def expected_change(self, k_factor, params=DEFAULT_PARAMS):
        """Change the Elo formula gives for this game, or None without a rating."""
        if self.player_rating_before is None:
            return None
        return rating_delta(
            self.player_rating_before, self.opponent_rating, self.outcome, params.with_k(k_factor)
        )

    def resolved_change(self, k_factor, params=DEFAULT_PARAMS):
        if self.rating_change is not None:
            return self.rating_change
        return self.expected_change(k_factor, params)


@dataclass(frozen=True)
class GameDataset:
    """An immutable, non-empty sequence of game records."""

    records: tuple
    label: str = ""
    k_factor_used: float = 10.0
    _arrays: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        records = tuple(self.records)
        if not records:
            raise DomainError("a dataset needs at least one record")
        object.__setattr__(self, "records", records)
        if not (math.isfinite(self.k_factor_used) and self.k_factor_used > 0):
            raise DomainError(f"k_factor_used must be positive, got {self.k_factor_used!r}")

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]

    @property
    def opponent_ratings(self):
        if "opp" not in self._arrays:
            arr = np.array([r.opponent_rating for r in self.records], dtype=float)
            arr.setflags(write=False)
            self._arrays["opp"] = arr
        return self._arrays["opp"]

    @property
    def scores(self):
        if "score" not in self._arrays:
            arr = np.array([r.outcome.value for r in self.records], dtype=float)
            arr.setflags(write=False)
            self._arrays["score"] = arr
        return self._arrays["score"]

    def rating_changes(self, params=DEFAULT_PARAMS):
        """Per-game changes, reconstructing missing ones from the prior rating."""
        out = []
        for i, rec in enumerate(self.records):
            change = rec.resolved_change(self.k_factor_used, params)
            if change is None:
                raise MissingRatingChangeError(
                    f"record {i} has neither rating_change nor player_rating_before"
                )
            out.append(change)
        return out

    def validate(self, params=DEFAULT_PARAMS, tolerance=CHANGE_TOLERANCE):
        """Check recorded changes against the Elo formula.

        Raises InconsistentRatingChangeError naming the first offending record.
        """
        for i, rec in enumerate(self.records):
            _check_consistent(rec, self.k_factor_used, params, tolerance, f"record {i}", None, None)
        return self


def _check_consistent(rec, k_factor, params, tolerance, what, line, path):
    if rec.rating_change is None:
        return
    expected = rec.expected_change(k_factor, params)
    if expected is not None and abs(expected - rec.rating_change) > tolerance:
        raise InconsistentRatingChangeError(
            f"{what}: rating_change {rec.rating_change} but the Elo formula "
            f"gives {expected:.4f} (K={k_factor})",
            line=line,
            path=path,
        )


def _fmt_number(x):
    if x is None:
        return ""
    x = float(x)
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _fmt_outcome(outcome):
    return {1.0: "1", 0.5: "0.5", 0.0: "0"}[outcome.value]


def dumps_dataset(dataset, format="csv"):
    """Render a dataset in the delimited-text format."""
    delimiter = _delimiter(format)
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    writer.writerow(HEADER)
    for rec in dataset:
        writer.writerow(
            [
                rec.date.isoformat() if rec.date else "",
                _fmt_number(rec.opponent_rating),
                _fmt_outcome(rec.outcome),
                _fmt_number(rec.player_rating_before),
                _fmt_number(rec.rating_change),
            ]
        )
    return buf.getvalue()


def write_dataset(dataset, path, format="csv"):
    Path(path).write_text(dumps_dataset(dataset, format), encoding="utf-8")


def _delimiter(format):
    try:
        return _DELIMITERS[format]
    except KeyError:
        raise DomainError(f"unknown dataset format {format!r}; expected one of {sorted(_DELIMITERS)}") from None


def _parse_float(text, name, line, path, required):
    text = text.strip()
    if not text:
        if required:
            raise FieldParseError(f"{name} is required", line=line, path=path)
        return None
    try:
        value = float(text)
    except ValueError:
        raise FieldParseError(f"cannot parse {name} {text!r}", line=line, path=path) from None
    if not math.isfinite(value):
        raise FieldParseError(f"{name} must be finite, got {text!r}", line=line, path=path)
    return value


def _parse_outcome(text, line, path):
    text = text.strip()
    try:
        value = float(text)
    except ValueError:
        raise OutcomeError(f"outcome {text!r} is not a number", line=line, path=path) from None
    if value not in (0.0, 0.5, 1.0):
        raise OutcomeError(f"outcome {text!r} is not one of 1, 0.5, 0", line=line, path=path)
    return GameOutcome(value)


def _parse_date(text, line, path):
    text = text.strip()
    if not text:
        return None
    try:
        return dt.date.fromisoformat(text)
    except ValueError:
        raise FieldParseError(f"cannot parse date {text!r}", line=line, path=path) from None


def loads_dataset(text, format="csv", label="", k_factor=10.0, path=None, validate=True):
    """Parse dataset text. ``path`` only decorates error messages."""
    reader = csv.reader(io.StringIO(text), delimiter=_delimiter(format))
    rows = list(reader)
    if not rows:
        raise HeaderError("file is empty", line=1, path=path)
    header = tuple(col.strip() for col in rows[0])
    if header != HEADER:
        raise HeaderError(f"expected header {','.join(HEADER)!r}, got {','.join(header)!r}", line=1, path=path)
    records = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(HEADER):
            raise FieldParseError(f"expected {len(HEADER)} fields, got {len(row)}", line=lineno, path=path)
        date, opp, outcome, before, change = row
        rec = GameRecord(
            opponent_rating=_parse_float(opp, "opponent_rating", lineno, path, required=True),
            outcome=_parse_outcome(outcome, lineno, path),
            player_rating_before=_parse_float(before, "player_rating_before", lineno, path, False),
            rating_change=_parse_float(change, "rating_change", lineno, path, False),
            date=_parse_date(date, lineno, path),
        )
        if validate:
            _check_consistent(rec, k_factor, DEFAULT_PARAMS, CHANGE_TOLERANCE, "row", lineno, path)
        records.append(rec)
    if not records:
        raise DatasetError("dataset has no records", path=path)
    return GameDataset(tuple(records), label=label, k_factor_used=k_factor)


def bundled_path(name):
    """Filesystem path of one of the bundled synthetic datasets."""
    if name not in BUNDLED:
        raise DatasetNotFoundError(f"no bundled dataset named {name!r}; choose from {', '.join(BUNDLED)}")
    return resources.files("elo_horizon") / "data" / f"{name}.csv"


def load_dataset(path, format=None, label=None, k_factor=10.0, validate=True):
    """Read and validate a dataset file.

    ``path`` may also be the name of a bundled dataset (``synthetic-2022`` or
    ``synthetic-2019``). ``format`` defaults to ``tsv`` for ``.tsv`` files and
    ``csv`` otherwise.
    """
    if isinstance(path, str) and path in BUNDLED:
        source = bundled_path(path)
        label = path if label is None else label
    else:
        source = Path(path)
        if label is None:
            label = source.stem
    if format is None:
        format = "tsv" if Path(str(source)).suffix.lower() == ".tsv" else "csv"
    try:
        text = source.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise DatasetNotFoundError("file not found", path=path) from None
    except IsADirectoryError:
        raise DatasetNotFoundError("path is a directory", path=path) from None
    return loads_dataset(text, format=format, label=label, k_factor=k_factor, path=path, validate=validate)
