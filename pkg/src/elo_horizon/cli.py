"""Command-line interface.

Subcommands::

    summarize     per-game rating-change statistics of one or more datasets
    forecast      closed-form endpoint / first-passage probabilities, implied drift
    simulate      one Monte Carlo run, with histogram and trajectory data
    sweep         reach probabilities over a datasets x K-factor grid
    gen-synthetic rebuild the bundled synthetic datasets

``--data`` takes a file path or a bundled name (``synthetic-2022``,
``synthetic-2019``). Exit status is 0 on success, 1 for usage errors and 2
for data errors.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .dataset import BUNDLED, dumps_dataset, load_dataset
from .elo import EloParams
from .exceptions import DatasetError, DomainError
from .forecast import (
    DriftVol,
    endpoint_reach_probability,
    estimate_moments_from_deltas,
    first_passage_probability,
    games_for_years,
    implied_drift,
)
from .plotdata import (
    dataset_histograms,
    ensure_dir,
    first_passage_histogram,
    write_histogram_csv,
    write_outcomes_csv,
    write_trajectories_csv,
)
from .simulate import SimConfig, k_factor_sweep, run_simulation, summarize_dataset

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
SEED_ENV = "ELO_HORIZON_SEED"
# One- and three-year forecast horizons, in games.
DEFAULT_HORIZONS = (110, 330)
FORMATS = ("text", "json", "csv")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunSpec:
    """Parameters of a simulate/sweep invocation after all defaults are applied."""

    datasets: list
    start: float = 2860.0
    target: float = 2900.0
    k_values: list = field(default_factory=lambda: [10.0])
    games: int = 200
    paths: int = 2000
    seed: int = 0
    output_format: str = "text"
    json_path: str = None
    csv_dir: str = None
    odds_base: float = 10.0
    growth_scale: float = 400.0
    alpha: float = 1.0

    def __post_init__(self):
        if self.output_format not in FORMATS:
            raise UsageError(f"unknown output format {self.output_format!r}")
        if not self.datasets:
            raise UsageError("--data is required")
        if not self.k_values:
            raise UsageError("--k needs at least one value")

    def sim_config(self, k_factor, n_samples=10):
        try:
            return SimConfig(
                start_rating=self.start,
                target_rating=self.target,
                horizon_games=self.games,
                n_paths=self.paths,
                k_factor=k_factor,
                elo_params=EloParams(self.odds_base, self.growth_scale, self.alpha, k_factor),
                seed=self.seed,
                n_sample_trajectories=n_samples,
            )
        except DomainError as exc:
            raise UsageError(str(exc)) from None


# -- argument helpers ------------------------------------------------------

def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _name_list(text):
    return [x.strip() for x in text.split(",") if x.strip()]


def _seed(text):
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def read_config(path):
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc.strerror}") from None
    out = {}
    for lineno, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _add_output(p):
    p.add_argument("--format", dest="output_format", choices=FORMATS, default="text",
                   help="what to print on stdout")
    p.add_argument("--json", dest="json_path", metavar="FILE", help="also write the JSON document here")
    p.add_argument("--csv", dest="csv_dir", metavar="DIR", help="write tables and plot data as CSV files here")


def _add_elo(p):
    p.add_argument("--odds-base", type=float, default=10.0)
    p.add_argument("--growth-scale", type=float, default=400.0)
    p.add_argument("--alpha", type=float, default=1.0)


def _add_run(p, k_default):
    p.add_argument("--start", type=float, default=2860.0, help="start rating")
    p.add_argument("--target", type=float, default=2900.0, help="target rating")
    p.add_argument("--k", dest="k_values", type=_float_list, default=k_default, help="K-factor(s), comma-separated")
    p.add_argument("--games", type=int, default=200, help="horizon in games")
    p.add_argument("--paths", type=int, default=2000, help="number of simulated paths")
    p.add_argument("--seed", type=_seed, default=None, help=f"random seed (default: ${SEED_ENV} or 0)")
    p.add_argument("--n-jobs", type=int, default=1, help="worker threads; output does not depend on it")
    _add_elo(p)


def build_parser():
    parser = _Parser(prog="elo-horizon", description="Elo rating forecasts and Monte Carlo rating paths.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", metavar="FILE", help="flat key = value file of option defaults")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("summarize", help="summary statistics of per-game rating changes")
    p.add_argument("--data", type=_name_list)
    p.add_argument("--dataset-k", type=float, default=10.0, help="K used when the games were rated")
    p.add_argument("--ddof", type=int, choices=(0, 1), default=0, help="standard deviation divisor N - ddof")
    _add_output(p)

    p = sub.add_parser("forecast", help="closed-form Brownian-motion probabilities")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--data", help="estimate mu and sigma from this dataset")
    src.add_argument("--mu", type=float, help="drift per game")
    p.add_argument("--sigma", type=float, help="volatility per sqrt(game)")
    p.add_argument("--start", type=float, default=2860.0)
    p.add_argument("--target", type=float, default=2900.0)
    horizon = p.add_mutually_exclusive_group()
    horizon.add_argument("--games", type=int, action="append", help="horizon in games (repeatable)")
    horizon.add_argument("--years", type=float, action="append", help="horizon in years of 55 games (repeatable)")
    p.add_argument("--mode", choices=("endpoint", "first-passage", "both"), default="both")
    p.add_argument("--p", type=float, action="append", dest="probabilities",
                   help="report the drift needed for this success probability (repeatable)")
    _add_output(p)

    p = sub.add_parser("simulate", help="one Monte Carlo run")
    p.add_argument("--data")
    _add_run(p, [10.0])
    p.add_argument("--samples", type=int, default=10, help="trajectories kept for plotting")
    p.add_argument("--bin-width", type=float, default=10.0, help="first-passage histogram bin width, games")
    _add_output(p)

    p = sub.add_parser("sweep", help="reach probabilities over datasets x K")
    p.add_argument("--data", type=_name_list)
    _add_run(p, [10.0, 15.0])
    _add_output(p)

    p = sub.add_parser("gen-synthetic", help="rebuild the bundled synthetic datasets")
    p.add_argument("--out", default=".", help="directory to write into")
    p.add_argument("--check", action="store_true",
                   help="compare against the bundled copies instead of writing; exit 2 on mismatch")
    return parser, sub


def _parse(argv):
    parser, sub = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError("a subcommand is required: " + ", ".join(sub.choices))
    if args.config:
        cfg = read_config(args.config)
        subparser = sub.choices[args.command]
        # Keys may be spelled like the long option (n-jobs, k) or its dest (n_jobs, k_values).
        by_key = {}
        for action in subparser._actions:
            names = {action.dest} | {o.lstrip("-") for o in action.option_strings if o.startswith("--")}
            for name in names:
                by_key[name] = by_key[name.replace("-", "_")] = action
        unknown = sorted(set(cfg) - set(by_key))
        if unknown:
            raise UsageError(f"unknown config keys for {args.command}: {', '.join(unknown)}")
        converted = {}
        for key, raw in cfg.items():
            action = by_key[key]
            if isinstance(action, argparse._StoreTrueAction):
                if raw.lower() not in ("true", "false", "yes", "no", "1", "0"):
                    raise UsageError(f"config key {key}: expected true or false, got {raw!r}")
                converted[action.dest] = raw.lower() in ("true", "yes", "1")
                continue
            try:
                value = action.type(raw) if action.type else raw
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise UsageError(f"config key {key}: {exc}") from None
            converted[action.dest] = [value] if isinstance(action, argparse._AppendAction) else value
        subparser.set_defaults(**converted)
        args = parser.parse_args(argv)
    return args


def _resolve_seed(value):
    if value is not None:
        return value
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return _seed(env)
        except argparse.ArgumentTypeError as exc:
            raise UsageError(f"{SEED_ENV}: {exc}") from None
    return 0


# -- output ----------------------------------------------------------------

def _emit(args, doc, text, csv_tables=None):
    if args.json_path:
        Path(args.json_path).write_text(_to_json(doc), encoding="utf-8")
    if args.csv_dir and csv_tables:
        out = ensure_dir(args.csv_dir)
        for name, writer in csv_tables.items():
            writer(out / name)
    if args.output_format == "json":
        sys.stdout.write(_to_json(doc))
    elif args.output_format == "csv":
        sys.stdout.write(_flat_csv(doc))
    else:
        sys.stdout.write(text)


def _to_json(doc):
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _flat_csv(doc):
    rows = doc.get("rows")
    if not rows:
        return _to_json(doc)
    keys = list(rows[0])
    lines = [",".join(keys)] + [",".join(_cell(r[k]) for k in keys) for r in rows]
    return "\n".join(lines) + "\n"


def _cell(value):
    return "" if value is None else repr(value) if isinstance(value, float) else str(value)


def _table(header, rows):
    cells = [header] + [[_cell_text(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _cell_text(v):
    if isinstance(v, float):
        return f"{v:.4g}" if abs(v) < 1e-3 and v != 0 else f"{v:.4f}".rstrip("0").rstrip(".")
    return str(v)


def _percent(p):
    return f"{100 * p:.2f}%"


# -- commands --------------------------------------------------------------

def _load(name, k_factor=10.0):
    return load_dataset(name, k_factor=k_factor)


def _require_data(args):
    if not args.data:
        raise UsageError(f"{args.command} needs --data")


def cmd_summarize(args):
    _require_data(args)
    rows = []
    for name in args.data:
        ds = _load(name, args.dataset_k)
        stats = summarize_dataset(ds, ddof=args.ddof)
        rows.append({"dataset": ds.label, **stats.as_dict()})
    doc = {"command": "summarize", "ddof": args.ddof, "rows": rows}
    text = _table(
        ["dataset", "N", "mu", "sigma", "min", "max"],
        [[r["dataset"], r["N"], round(r["mu"], 2), round(r["sigma"], 2), r["min"], r["max"]] for r in rows],
    )

    def write(path):
        path.write_text(_flat_csv(doc), encoding="utf-8")

    _emit(args, doc, text, {"summary.csv": write})


def cmd_forecast(args):
    if args.data:
        if args.sigma is not None:
            raise UsageError("--sigma cannot be combined with --data")
        ds = _load(args.data)
        dv, _ = estimate_moments_from_deltas(ds.rating_changes())
        source = ds.label
    else:
        if args.mu is None or args.sigma is None:
            raise UsageError("give either --data or both --mu and --sigma")
        try:
            dv = DriftVol(args.mu, args.sigma)
        except DomainError as exc:
            raise UsageError(str(exc)) from None
        source = "given"
    if args.years:
        horizons = [games_for_years(y) for y in args.years]
    else:
        horizons = args.games or list(DEFAULT_HORIZONS)
    try:
        rows = []
        for t in horizons:
            row = {"games": t}
            if args.mode in ("endpoint", "both"):
                row["endpoint"] = endpoint_reach_probability(args.start, args.target, dv, t)
            if args.mode in ("first-passage", "both"):
                row["first_passage"] = first_passage_probability(args.start, args.target, dv, t)
            for p in args.probabilities or []:
                row[f"implied_mu@{p:g}"] = implied_drift(args.start, args.target, t, p, dv.sigma)
            rows.append(row)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    doc = {
        "command": "forecast",
        "source": source,
        "mu": dv.mu,
        "sigma": dv.sigma,
        "start": args.start,
        "target": args.target,
        "rows": rows,
    }
    header = list(rows[0])
    text = f"mu={dv.mu:.4f}  sigma={dv.sigma:.4f}  start={args.start:g}  target={args.target:g}\n"
    text += _table(header, [[r[k] for k in header] for r in rows])

    def write(path):
        path.write_text(_flat_csv(doc), encoding="utf-8")

    _emit(args, doc, text, {"forecast.csv": write})


def _run_spec(args, datasets):
    return RunSpec(
        datasets=datasets,
        start=args.start,
        target=args.target,
        k_values=args.k_values,
        games=args.games,
        paths=args.paths,
        seed=_resolve_seed(args.seed),
        output_format=args.output_format,
        json_path=args.json_path,
        csv_dir=args.csv_dir,
        odds_base=args.odds_base,
        growth_scale=args.growth_scale,
        alpha=args.alpha,
    )


def _config_doc(cfg):
    return {
        "start_rating": cfg.start_rating,
        "target_rating": cfg.target_rating,
        "horizon_games": cfg.horizon_games,
        "n_paths": cfg.n_paths,
        "k_factor": cfg.k_factor,
        "odds_base": cfg.elo_params.odds_base,
        "growth_scale": cfg.elo_params.growth_scale,
        "alpha": cfg.elo_params.alpha,
        "seed": cfg.seed,
    }


def cmd_simulate(args):
    _require_data(args)
    plan = _run_spec(args, [args.data])
    if len(plan.k_values) != 1:
        raise UsageError("simulate takes a single --k; use sweep for several")
    if args.samples < 0:
        raise UsageError("--samples must be non-negative")
    ds = _load(args.data)
    cfg = plan.sim_config(plan.k_values[0], n_samples=args.samples)
    result = run_simulation(cfg, ds, n_jobs=_n_jobs(args))
    stats = summarize_dataset(ds)
    try:
        fp_hist = first_passage_histogram(result, args.bin_width)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    hists = dataset_histograms(ds)
    doc = {
        "command": "simulate",
        "dataset": ds.label,
        "config": _config_doc(cfg),
        "dataset_summary": stats.as_dict(),
        "reach_count": result.reach_count,
        "reach_probability": result.reach_probability,
        "standard_error": result.standard_error,
        "first_passage_games": list(result.first_passage_games),
        "first_passage_histogram": fp_hist.as_dict() if fp_hist else None,
        "rating_change_histogram": hists["rating_change"].as_dict(),
        "opponent_rating_histogram": hists["opponent_rating"].as_dict(),
        "mean_trajectory": list(result.mean_trajectory),
        "sample_trajectories": [list(t) for t in result.sample_trajectories],
    }
    text = (
        f"dataset {ds.label}: {cfg.n_paths} paths x {cfg.horizon_games} games, K={cfg.k_factor:g}, seed={cfg.seed}\n"
        f"reached {cfg.target_rating:g} from {cfg.start_rating:g} in {result.reach_count} paths "
        f"({_percent(result.reach_probability)} +/- {_percent(result.standard_error)})\n"
    )
    if result.first_passage_games:
        games = sorted(result.first_passage_games)
        text += f"first passage: median game {games[len(games) // 2]}, earliest {games[0]}\n"
    text += f"mean rating after {cfg.horizon_games} games: {result.mean_trajectory[-1]:.2f}\n"
    tables = {
        "trajectories.csv": lambda p: write_trajectories_csv(result, p),
        "rating_change_histogram.csv": lambda p: write_histogram_csv(hists["rating_change"], p, "change"),
        "opponent_rating_histogram.csv": lambda p: write_histogram_csv(hists["opponent_rating"], p, "rating"),
        "game_outcomes.csv": lambda p: write_outcomes_csv(ds, p, cfg.elo_params.with_k(ds.k_factor_used)),
    }
    if fp_hist:
        tables["first_passage_histogram.csv"] = lambda p: write_histogram_csv(fp_hist, p, "game")
    _emit(args, doc, text, tables)


def _n_jobs(args):
    if args.n_jobs == 0 or args.n_jobs < -1:
        raise UsageError("--n-jobs must be a positive integer or -1")
    return args.n_jobs


def cmd_sweep(args):
    _require_data(args)
    plan = _run_spec(args, args.data)
    rows = []
    for name in plan.datasets:
        ds = _load(name)
        base = plan.sim_config(plan.k_values[0], n_samples=0)
        for k, result in k_factor_sweep(base, plan.k_values, ds, n_jobs=_n_jobs(args)):
            rows.append(
                {
                    "dataset": ds.label,
                    "k_factor": k,
                    "reach_count": result.reach_count,
                    "reach_probability": result.reach_probability,
                    "standard_error": result.standard_error,
                }
            )
    doc = {"command": "sweep", "config": _config_doc(base), "rows": rows}
    doc["config"].pop("k_factor")
    doc["config"]["k_values"] = plan.k_values
    labels = list(dict.fromkeys(r["dataset"] for r in rows))
    grid = {(r["dataset"], r["k_factor"]): r["reach_probability"] for r in rows}
    text = (
        f"P(reach {plan.target:g} from {plan.start:g} within {plan.games} games), "
        f"{plan.paths} paths, seed={base.seed}\n"
    )
    text += _table(["dataset"] + [f"K={k:g}" for k in plan.k_values],
                   [[lab] + [_percent(grid[(lab, float(k))]) for k in plan.k_values] for lab in labels])

    def write(path):
        path.write_text(_flat_csv(doc), encoding="utf-8")

    _emit(args, doc, text, {"sweep.csv": write})


def cmd_gen_synthetic(args):
    from . import synthetic
    from .dataset import bundled_path

    if args.check:
        stale = [n for n in BUNDLED if dumps_dataset(synthetic.build(n)) != bundled_path(n).read_text(encoding="utf-8")]
        if stale:
            raise DatasetError("bundled datasets differ from a fresh build: " + ", ".join(stale))
        sys.stdout.write("bundled datasets match a fresh build\n")
        return
    for path in synthetic.write_all(args.out):
        sys.stdout.write(f"wrote {path}\n")


COMMANDS = {
    "summarize": cmd_summarize,
    "forecast": cmd_forecast,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "gen-synthetic": cmd_gen_synthetic,
}


def run_cli(argv=None):
    """Run the CLI and return its exit status instead of exiting."""
    try:
        args = _parse(argv)
        COMMANDS[args.command](args)
    except SystemExit as exc:
        # --help and --version
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    except UsageError as exc:
        print(f"elo-horizon: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DatasetError as exc:
        print(f"elo-horizon: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DomainError as exc:
        print(f"elo-horizon: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
