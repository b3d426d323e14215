import json
import os
import subprocess

import pytest

import perfenv


def fixture_a():
    base = [1.0, .9, .8, .7, .6, .5, .4, .3, .2, .1]
    return perfenv.QualityMatrix([
        (0, base + [.05]),
        (1, base + [.04]),
        (2, [1.0, .9, .8, .7] + [.7] * 7),
        (3, base + [.06]),
    ])


def test_hand_fixture_ledger():
    r = perfenv.race(fixture_a(), seed_configs=[0])
    assert r.pool == [1]
    assert r.total_virtual_cost == 3136
    statuses = [(o["config_id"], o["pass"], o["status"]) for o in r.outcomes]
    assert statuses[2] == (2, 1, "terminated")
    assert statuses[-1] == (2, 2, "terminated")


def test_margin_off_matches_truth():
    m = perfenv.generate_synthetic(500, seed=3)
    truth = perfenv.build_truth(m, 0.02)
    r = perfenv.race(m, pool_fraction=0.02, margin="off", seed=1)
    assert r.pool == m.top_fraction(0.02) == truth.true_top_set
    assert perfenv.speedup(r, truth) == 1.0
    assert perfenv.overlap_fraction(r, truth) == 100.0


def test_synthetic_racing_saves_time():
    m = perfenv.generate_synthetic(2000, correlation=0.85, noise=0.03, seed=1)
    row = perfenv.experiment(m, repeats=10)
    assert row["speedup"] > 3.0
    assert row["overlap_top_pct"] >= 90.0


def test_figure_series():
    m = perfenv.generate_synthetic(300, seed=2)
    rows = perfenv.figure_data(m)
    top = [v for _, s, v in rows if s == "top_pp"]
    assert top == sorted(top, reverse=True)
    assert [v for _, s, v in rows if s == "rank_top"][-1] == 0.0


def test_bad_input_raises():
    with pytest.raises(ValueError):
        perfenv.QualityMatrix([(0, [0.2, 0.5])])
    with pytest.raises(ValueError):
        perfenv.race(fixture_a(), margin="x0.5")


def test_matrix_file_round_trip(tmp_path):
    m = perfenv.generate_synthetic(50, seed=4)
    path = tmp_path / "m.csv"
    perfenv.save_matrix(path, m)
    back = perfenv.load_matrix(path)
    assert back.rows() == m.rows()
    assert json.loads((tmp_path / "m.meta.json").read_text())["schedule"]["count"] == 11


def test_splp_and_cmcs():
    inst = perfenv.generate_splp_instance(4, 6, 1)
    assert inst.objective([0]) == inst.open_cost[0] + sum(inst.service_cost[0])
    assert len(perfenv.cmcs_configurations(1)) == 216
    m = perfenv.trace_cmcs(12, instances=2, seed=1, facilities=8, customers=12)
    assert len(m) == 12
    assert all(r == sorted(r, reverse=True) for r in m.rows())


@pytest.mark.skipif("PERFENV_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_matches_module(tmp_path):
    cli = os.path.abspath(os.environ["PERFENV_CLI"])
    subprocess.run([cli, "synth", "--configs", "300", "--seed", "7", "-o", "m.csv"], cwd=tmp_path, check=True)
    subprocess.run([cli, "race", "--matrix", "m.csv", "--seed", "3", "-o", "r.json"], cwd=tmp_path, check=True)
    cli_result = json.loads((tmp_path / "r.json").read_text())
    m = perfenv.load_matrix(tmp_path / "m.csv")
    r = perfenv.race(m, seed=3)
    assert {p["config_id"] for p in cli_result["pool"]} == set(r.pool)
    assert cli_result["total_virtual_cost"] == r.total_virtual_cost
