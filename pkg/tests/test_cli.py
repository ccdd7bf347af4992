import json

import pytest

from elo_horizon.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, run_cli
from elo_horizon.dataset import load_dataset
from elo_horizon.simulate import SimConfig, k_factor_sweep, run_simulation


def run(capsys, *argv):
    code = run_cli(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    assert code == EXIT_OK, err
    return json.loads(out)


def test_summarize_text(capsys):
    code, out, _ = run(capsys, "summarize", "--data", "synthetic-2022")
    assert code == EXIT_OK
    row = out.splitlines()[2].split()
    assert row == ["synthetic-2022", "110", "-0.11", "2.67", "-7.44", "4.5"]


def test_summarize_json_both(capsys):
    doc = run_json(capsys, "summarize", "--data", "synthetic-2022,synthetic-2019")
    r22, r19 = doc["rows"]
    assert (r22["N"], r22["min"], r22["max"]) == (110, -7.44, 4.5)
    assert (r19["N"], r19["min"], r19["max"]) == (78, -2.8, 4.7)


def test_forecast_example(capsys):
    doc = run_json(capsys, "forecast", "--mu", "-0.11", "--sigma", "2.67", "--start", "2860",
                   "--target", "2900", "--games", "110", "--p", "0.5")
    (row,) = doc["rows"]
    assert row["endpoint"] == pytest.approx(0.0314, abs=5e-4)
    assert row["first_passage"] > row["endpoint"]
    assert row["implied_mu@0.5"] == pytest.approx(40 / 110)


def test_forecast_default_horizons(capsys):
    doc = run_json(capsys, "forecast", "--mu", "-0.11", "--sigma", "2.67")
    assert [r["games"] for r in doc["rows"]] == [110, 330]


def test_forecast_from_data_and_years(capsys):
    doc = run_json(capsys, "forecast", "--data", "synthetic-2019", "--years", "1", "--mode", "endpoint")
    assert doc["rows"][0]["games"] == 55
    assert "first_passage" not in doc["rows"][0]
    assert doc["mu"] == pytest.approx(0.48, abs=0.01)


@pytest.mark.parametrize(
    "argv",
    [
        ["forecast", "--mu", "0.1"],
        ["forecast", "--mu", "0.1", "--sigma", "-1"],
        ["forecast", "--mu", "0.1", "--sigma", "1", "--target", "2800"],
        ["forecast", "--mu", "0.1", "--sigma", "1", "--p", "1.5"],
        ["simulate", "--data", "synthetic-2022", "--k", "10,15"],
        ["simulate", "--data", "synthetic-2022", "--paths", "0"],
        ["simulate"],
        ["sweep", "--data", "synthetic-2022", "--seed", "-3"],
        ["simulate", "--data", "synthetic-2022", "--bogus"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert err.startswith("elo-horizon: error:")
    assert out == ""


def test_data_errors(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("date,opponent_rating,outcome,player_rating_before,rating_change\n,2800,0.7,,\n")
    code, _, err = run(capsys, "summarize", "--data", str(bad))
    assert code == EXIT_DATA
    assert "line 2" in err
    code, _, _ = run(capsys, "simulate", "--data", str(tmp_path / "missing.csv"))
    assert code == EXIT_DATA


def test_help_exits_cleanly(capsys):
    assert run_cli(["--help"]) == 0


def test_simulate_document(capsys):
    doc = run_json(capsys, "simulate", "--data", "synthetic-2019", "--paths", "300", "--seed", "5", "--samples", "3")
    assert doc["config"]["n_paths"] == 300 and doc["config"]["seed"] == 5
    assert doc["reach_count"] == len(doc["first_passage_games"])
    assert sum(doc["first_passage_histogram"]["counts"]) == doc["reach_count"]
    assert len(doc["mean_trajectory"]) == 201
    assert len(doc["sample_trajectories"]) == 3
    assert sum(doc["rating_change_histogram"]["counts"]) == 78
    expected = run_simulation(SimConfig(n_paths=300, seed=5, n_sample_trajectories=3), load_dataset("synthetic-2019"))
    assert doc["reach_probability"] == expected.reach_probability
    assert doc["mean_trajectory"] == list(expected.mean_trajectory)


def test_simulate_byte_identical(capsys, tmp_path):
    argv = ["simulate", "--data", "synthetic-2022", "--paths", "700", "--seed", "99"]
    outs = []
    for name, extra in (("a.json", []), ("b.json", []), ("c.json", ["--n-jobs", "3"])):
        assert run_cli(argv + extra + ["--json", str(tmp_path / name)]) == EXIT_OK
        outs.append((tmp_path / name).read_bytes())
    capsys.readouterr()
    assert outs[0] == outs[1] == outs[2]


def test_simulate_csv_dir(capsys, tmp_path):
    out = tmp_path / "plots"
    code, _, _ = run(capsys, "simulate", "--data", "synthetic-2019", "--paths", "200", "--csv", str(out))
    assert code == EXIT_OK
    names = sorted(p.name for p in out.iterdir())
    assert names == [
        "first_passage_histogram.csv",
        "game_outcomes.csv",
        "opponent_rating_histogram.csv",
        "rating_change_histogram.csv",
        "trajectories.csv",
    ]
    lines = (out / "trajectories.csv").read_text().splitlines()
    assert lines[0].startswith("game,mean,path_0")
    assert len(lines) == 202


def test_sweep_matches_library(capsys):
    doc = run_json(capsys, "sweep", "--data", "synthetic-2022,synthetic-2019", "--k", "10,15",
                   "--paths", "400", "--seed", "7")
    assert [(r["dataset"], r["k_factor"]) for r in doc["rows"]] == [
        ("synthetic-2022", 10.0), ("synthetic-2022", 15.0), ("synthetic-2019", 10.0), ("synthetic-2019", 15.0)]
    base = SimConfig(n_paths=400, seed=7, n_sample_trajectories=0)
    expected = []
    for name in ("synthetic-2022", "synthetic-2019"):
        for _, res in k_factor_sweep(base, [10, 15], load_dataset(name)):
            expected.append((res.reach_count, res.reach_probability, res.standard_error))
    assert [(r["reach_count"], r["reach_probability"], r["standard_error"]) for r in doc["rows"]] == expected


def test_sweep_text_and_csv(capsys, tmp_path):
    code, out, _ = run(capsys, "sweep", "--data", "synthetic-2022", "--paths", "100", "--csv", str(tmp_path))
    assert code == EXIT_OK
    assert "K=10" in out and "K=15" in out
    assert (tmp_path / "sweep.csv").read_text().startswith("dataset,k_factor,reach_count")


def test_seed_env_and_override(capsys, monkeypatch):
    monkeypatch.setenv("ELO_HORIZON_SEED", "31")
    doc = run_json(capsys, "simulate", "--data", "synthetic-2022", "--paths", "50")
    assert doc["config"]["seed"] == 31
    doc = run_json(capsys, "simulate", "--data", "synthetic-2022", "--paths", "50", "--seed", "4")
    assert doc["config"]["seed"] == 4
    monkeypatch.setenv("ELO_HORIZON_SEED", "not-a-seed")
    code, _, _ = run(capsys, "simulate", "--data", "synthetic-2022", "--paths", "50")
    assert code == EXIT_USAGE


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep settings\ndata = synthetic-2019\nk = 10,20\npaths = 120\nseed = 3\n")
    doc = run_json(capsys, "--config", str(cfg), "sweep")
    assert [r["k_factor"] for r in doc["rows"]] == [10.0, 20.0]
    assert doc["config"]["n_paths"] == 120
    doc = run_json(capsys, "--config", str(cfg), "sweep", "--paths", "60")
    assert doc["config"]["n_paths"] == 60


def test_config_file_errors(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("colour = blue\n")
    assert run(capsys, "--config", str(cfg), "sweep")[0] == EXIT_USAGE
    cfg.write_text("just words\n")
    assert run(capsys, "--config", str(cfg), "sweep")[0] == EXIT_USAGE
    assert run(capsys, "--config", str(tmp_path / "none.cfg"), "sweep")[0] == EXIT_USAGE


def test_gen_synthetic(capsys, tmp_path):
    code, out, _ = run(capsys, "gen-synthetic", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert load_dataset(tmp_path / "synthetic-2022.csv").records == load_dataset("synthetic-2022").records
    code, out, _ = run(capsys, "gen-synthetic", "--check")
    assert code == EXIT_OK and "match" in out


def test_config_boolean_flag(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("check = yes\n")
    code, out, _ = run(capsys, "--config", str(cfg), "gen-synthetic")
    assert code == EXIT_OK and "match" in out
    cfg.write_text("check = maybe\n")
    assert run(capsys, "--config", str(cfg), "gen-synthetic")[0] == EXIT_USAGE
