import math

import numpy as np
import pytest

import boussinesq as bq


def test_methods_listed():
    assert set(bq.methods()) == {"picard", "newton", "picard-newton", "aa-picard-newton"}
    assert bq.RUNS_CSV_HEADER.startswith("case,method,depth,ra,iteration")


def test_mesh_stats_barycentric_triples():
    s = bq.mesh_stats("cavity", n=4)
    assert s["base"]["triangles"] == 32
    assert s["solved"]["triangles"] == 96
    assert math.isclose(s["solved"]["area"], 1.0)


def test_conduction_solution():
    r = bq.solve("cavity", method="newton", ra=0.0, n=3)
    assert r["status"] == "converged"
    assert np.allclose(r["T"], r["nodes"][:, 0], atol=1e-12)
    assert np.abs(r["u"]).max() < 1e-12


def test_solve_returns_history_and_fields():
    r = bq.solve("cavity", method="aa-picard-newton", depth=2, ra=1e3, n=4)
    assert r["status"] == "converged"
    assert r["residuals"].shape == (r["iterations"],)
    assert r["residuals"][-1] < 1e-8
    assert r["u"].shape == (r["nodes"].shape[0], 2)
    assert r["divergence_norm"] < 1e-10


def test_bad_options_raise_value_error():
    with pytest.raises(ValueError, match="method"):
        bq.solve(method="nwton", n=2)
    with pytest.raises(ValueError):
        bq.mesh_stats("cavity", n=1)


def test_sweep_and_csv_round_trip(tmp_path):
    res = bq.sweep("cavity", methods=["picard", "newton"], ra_list=[10.0, 100.0], n=2, out=tmp_path)
    assert len(res["runs"]) == 4
    assert [f["max_ra"] for f in res["frontier"]] == [100.0, 100.0]
    runs = bq.read_runs_csv(tmp_path / "runs.csv")
    assert [r["ra"] for r in runs] == [r["ra"] for r in res["runs"]]
    assert np.array_equal(runs[0]["residuals"], res["runs"][0]["residuals"])
    assert len(bq.read_frontier_csv(tmp_path / "frontier.csv")) == 2


def test_estimate_order():
    assert bq.estimate_order([0.5**k for k in range(12)]) == pytest.approx(1.0)
    assert bq.estimate_order([1.0, 0.1]) is None


def test_cli_in_process(tmp_path):
    code, out, err = bq.cli(["run", "--ra", "-5", "--n", "2", "--out", str(tmp_path)])
    assert code == 2
    assert "--ra" in err
    code, out, _ = bq.cli(["mesh-info", "--n", "2"])
    assert code == 0 and '"triangles"' in out
