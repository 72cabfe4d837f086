import json
import math
import os
from pathlib import Path

import pytest

import amenable

CONFIGS = Path(os.environ.get("AMENABLE_CONFIG_DIR", Path(__file__).resolve().parents[2] / "configs"))


def test_experiment_kinds():
    kinds = {k for k, _ in amenable.experiments()}
    assert {"boundary-suite", "tile", "stp", "ergodic", "ids", "percolation", "continuity"} <= kinds


def test_ball_sizes():
    assert len(amenable.ball("Z2", 2)) == 13
    assert len(amenable.ball("H", 1)) == 5
    assert len(amenable.ball("H", 2)) == 17


def test_interval_boundary():
    interval = [(i,) for i in range(10)]
    unit = [(-1,), (0,), (1,)]
    assert sorted(amenable.k_boundary("Z", interval, unit)) == [[-1], [0], [9], [10]]
    assert amenable.r_boundary("Z", interval, 1) == amenable.k_boundary("Z", interval, unit)
    assert amenable.boundary_ratio("Z", interval, unit) == pytest.approx(0.4)


def test_arccos_law():
    assert amenable.z_adjacency_ids(0.0) == pytest.approx(0.5)
    assert amenable.z_adjacency_ids(-3.0) == 0.0
    assert amenable.z_adjacency_ids(1.0) == pytest.approx(1 - math.acos(0.5) / math.pi)


def test_cluster_densities_on_z():
    s = amenable.cluster_statistics("Z", 0.5, 20000, samples=8, m_max=5, seed=3)
    assert s["window"] == 20000
    assert abs(s["kappa"] - 0.5) <= 4 * s["kappa_se"] + 1e-3
    assert len(s["c"]) == 5


def test_unknown_group():
    with pytest.raises(ValueError):
        amenable.ball("Z7", 1)


def test_invalid_config():
    with pytest.raises(amenable.ConfigError):
        amenable.resolve_config(json.dumps({"kind": "no_such_kind"}))


def test_run_and_verify(tmp_path):
    cfg = json.loads((CONFIGS / "acceptance" / "ac3_stp.json").read_text())
    out = amenable.run_json(json.dumps(cfg), str(tmp_path))
    assert out.exit_code == 0, out.message
    results = Path(out.results_dir)
    summary = json.loads((results / "summary.json").read_text())
    assert summary["status"] == "passed"
    assert amenable.verify(str(results / "verification.json")).exit_code == 0

    again = amenable.run_file(str(CONFIGS / "acceptance" / "ac3_stp.json"), str(tmp_path / "again"))
    assert (Path(again.results_dir) / "summary.json").read_bytes() == (results / "summary.json").read_bytes()
