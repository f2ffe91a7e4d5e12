import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uavloc import io
from uavloc.cli import EXIT_CONFIG, main
from uavloc.config import dump_scenario, preset
from uavloc.planner import PlannerKind
from uavloc.simulate import EpochMetrics, aggregate, compare_planners, simulate_runs

finite = st.floats(allow_nan=False, allow_infinity=False, min_value=0, max_value=1e300)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(finite, st.none() | finite, st.none() | finite), min_size=1, max_size=8))
def test_metrics_csv_round_trip(tmp_path_factory, rows):
    metrics = [EpochMetrics(t, r, d, c) for t, (r, d, c) in enumerate(rows)]
    path = tmp_path_factory.mktemp("csv") / "m.csv"
    io.write_metrics_csv(path, metrics, ["scenario=test"])
    assert io.read_metrics_csv(path) == metrics


@pytest.fixture(scope="module")
def tiny_cfg():
    return preset("realistic_4uav").replace(horizon=5, runs=3)


def test_jsonl_reaggregation_matches_metrics(tmp_path, tiny_cfg):
    results = simulate_runs(tiny_cfg)
    metrics = aggregate(results)
    path = tmp_path / "t.jsonl"
    io.write_trajectories(path, results)
    records = io.read_trajectories(path)
    assert [r["run_index"] for r in records] == [0, 1, 2]
    for t, m in enumerate(metrics):
        sq = []
        for rec in records:
            ep = rec["epochs"][t]
            x, y = ep["r_hat"]
            sq.append((x - tiny_cfg.target.x) ** 2 + (y - tiny_cfg.target.y) ** 2)
            assert len(ep["uav_positions"]) == len(ep["rss_dbm"]) == tiny_cfg.n_uav
        assert math.sqrt(math.fsum(sq) / len(sq)) == pytest.approx(m.rmse_m, rel=1e-12)


def test_comparison_csv_round_trip(tmp_path, tiny_cfg):
    comp = compare_planners(tiny_cfg, [PlannerKind.greedy(), PlannerKind.hybrid(2)])
    path = tmp_path / "c.csv"
    io.write_comparison_csv(path, comp)
    assert io.read_comparison_csv(path) == comp.rmse_columns()


def test_cli_run_and_trajectories(tmp_path, capsys):
    out = tmp_path / "run"
    rc = main(["run", "--scenario", "realistic_4uav", "--planner", "hybrid:2", "--runs", "2",
               "--seed", "3", "--out", str(out), "--trajectories"])
    assert rc == 0
    m = io.read_metrics_csv(out / "metrics_hybrid2.csv")
    assert len(m) == 28
    assert len(io.read_trajectories(out / "metrics_hybrid2.jsonl")) == 2
    assert "final RMSE" in capsys.readouterr().out


def test_cli_compare_from_file(tmp_path):
    scen = tmp_path / "s.yaml"
    dump_scenario(preset("favorable_4uav").replace(horizon=4, runs=2), scen)
    out = tmp_path / "cmp"
    rc = main(["compare", "--scenario", str(scen), "--planner", "greedy", "--planner",
               "predictive", "--out", str(out)])
    assert rc == 0
    cols = io.read_comparison_csv(out / "compare.csv")
    assert list(cols) == ["greedy", "predictive"] and len(cols["greedy"]) == 5
    assert (out / "summary.csv").read_text().startswith("planner,final_rmse_m")


def test_cli_sweep(tmp_path):
    scen = tmp_path / "s.yaml"
    dump_scenario(preset("single_realistic").replace(horizon=3, runs=2), scen)
    out = tmp_path / "sw"
    assert main(["sweep", "--scenario", str(scen), "--param", "sigma_db",
                 "--values", "urban_micro,0.5", "--out", str(out)]) == 0
    lines = (out / "sweep.csv").read_text().splitlines()
    assert lines[0] == "sigma_db,final_rmse_m" and lines[1].startswith("3.0,")
    assert main(["sweep", "--scenario", str(scen), "--param", "switch_epoch",
                 "--values", "1,2", "--out", str(out)]) == 0


def test_cli_presets(capsys):
    assert main(["presets"]) == 0
    text = capsys.readouterr().out
    assert "realistic_4uav" in text and "reach=0.955" in text


@pytest.mark.parametrize("argv", [
    ["run", "--scenario", "atlantis"],
    ["run", "--scenario", "realistic_4uav", "--planner", "annealing"],
    ["run", "--scenario", "realistic_4uav", "--runs", "0"],
    ["compare", "--scenario", "realistic_4uav", "--planner", "greedy"],
    ["sweep", "--scenario", "realistic_4uav", "--param", "switch_epoch", "--values", "x"],
    ["sweep", "--scenario", "realistic_4uav", "--param", "sigma_db", "--values", "lunar"],
])
def test_cli_config_errors_exit_2(tmp_path, argv, capsys):
    assert main([*argv, "--out", str(tmp_path)]) == EXIT_CONFIG
    assert "configuration error" in capsys.readouterr().err


def test_cli_bad_file_exit_2(tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("format_version: 9\n")
    assert main(["run", "--scenario", str(bad), "--out", str(tmp_path)]) == EXIT_CONFIG
