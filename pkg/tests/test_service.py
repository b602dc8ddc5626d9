import json

import pytest
from fastapi.testclient import TestClient

from siskit.fixtures import fixture_path, load_fixture
from siskit.service import create_app


@pytest.fixture
def client():
    return TestClient(create_app())


def open_session(client, fixture="deployment", raw_priorities=True):
    doc = json.loads(fixture_path(fixture).read_text())
    resp = client.post("/sessions", json={"model": doc, "raw_priorities": raw_priorities})
    assert resp.status_code == 201
    return resp.json()["session_id"]


def pair_scores(client, sid, dim_from, dim_to, pending=False):
    resp = client.get(f"/sessions/{sid}/scores", params={"pending": pending})
    assert resp.status_code == 200
    for pair in resp.json()["pairs"]:
        if pair["dim_from"] == dim_from and pair["dim_to"] == dim_to:
            return pair
    raise AssertionError(f"no pair {dim_from}-{dim_to}")


LAT_COST_ZERO = {
    "alternative": "containerization",
    "dim_from": "T",
    "dim_to": "Ec",
    "row": "latency",
    "col": "cost_efficiency",
    "effect": 0,
}


class TestSessionLifecycle:
    def test_create_and_fetch_model(self, client):
        sid = open_session(client, "case_study", raw_priorities=False)
        resp = client.get(f"/sessions/{sid}/model")
        assert resp.status_code == 200
        doc = resp.json()
        assert len(doc["quality_attributes"]) == 18
        assert {a["id"] for a in doc["alternatives"]} == {
            "single_model", "multi_model", "theoretical_optimal",
        }

    def test_model_includes_resolved_matrices(self, client):
        # dmap-only alternatives still come back with renderable grids
        sid = open_session(client, "case_study", raw_priorities=False)
        doc = client.get(f"/sessions/{sid}/model").json()
        multi = next(a for a in doc["alternatives"] if a["id"] == "multi_model")
        pairs = {(m["dim_from"], m["dim_to"]) for m in multi["resolved_matrices"]}
        assert pairs == {("T", "T"), ("T", "Ec"), ("T", "En"), ("T", "S"), ("Ec", "Ec"), ("S", "Ec")}
        for m in multi["resolved_matrices"]:
            assert len(m["effects"]) == len(m["row_qas"])
            assert all(len(row) == len(m["col_qas"]) for row in m["effects"])

    def test_model_pending_flag(self, client):
        sid = open_session(client)
        client.patch(f"/sessions/{sid}/cells", json=LAT_COST_ZERO)
        baseline = client.get(f"/sessions/{sid}/model").json()
        pending = client.get(f"/sessions/{sid}/model", params={"pending": True}).json()

        def cell(doc):
            ctn = next(a for a in doc["alternatives"] if a["id"] == "containerization")
            m = ctn["resolved_matrices"][0]
            return m["effects"][m["row_qas"].index("latency")][m["col_qas"].index("cost_efficiency")]

        assert cell(baseline) == -1
        assert cell(pending) == 0

    def test_unknown_session(self, client):
        resp = client.get("/sessions/nope/scores")
        assert resp.status_code == 404
        assert resp.json()["code"] == "session_not_found"

    def test_expired_session(self):
        client = TestClient(create_app(idle_timeout=0.0))
        sid = open_session(client)
        resp = client.get(f"/sessions/{sid}/scores")
        assert resp.status_code == 404
        assert resp.json()["code"] == "session_expired"
        # once expired the session is gone for good
        resp = client.get(f"/sessions/{sid}/scores")
        assert resp.json()["code"] == "session_not_found"

    def test_invalid_model_rejected(self, client):
        doc = json.loads(fixture_path("deployment").read_text())
        doc["quality_attributes"][0]["dimension"] = "X"
        resp = client.post("/sessions", json={"model": doc})
        assert resp.status_code == 400
        body = resp.json()
        assert body["code"] == "invalid_model"
        assert body["detail"]["path"]

    def test_missing_model_field(self, client):
        resp = client.post("/sessions", json={"raw_priorities": True})
        assert resp.status_code == 400
        assert resp.json()["code"] == "invalid_body"


class TestScores:
    def test_deployment_baseline(self, client):
        sid = open_session(client)
        pair = pair_scores(client, sid, "T", "Ec")
        assert pair["raw"]["serverless"] == 0.0
        assert pair["raw"]["containerization"] == 11.0
        assert pair["theoretical_optimal"] == 31.0
        assert pair["normalized_percent"]["containerization"] == pytest.approx(
            35.483870967741936
        )
        assert pair["normalized_percent"]["theoretical_optimal"] == 100.0

    def test_pending_flag_controls_visibility(self, client):
        sid = open_session(client)
        client.patch(f"/sessions/{sid}/cells", json=LAT_COST_ZERO)
        committed = pair_scores(client, sid, "T", "Ec", pending=False)
        pending = pair_scores(client, sid, "T", "Ec", pending=True)
        assert committed["raw"]["containerization"] == 11.0
        assert pending["raw"]["containerization"] == 18.0

    def test_409_without_theoretical_optimal(self, client):
        doc = json.loads(fixture_path("deployment").read_text())
        for alt in doc["alternatives"]:
            alt["is_theoretical_optimal"] = False
        resp = client.post("/sessions", json={"model": doc, "raw_priorities": True})
        sid = resp.json()["session_id"]
        resp = client.get(f"/sessions/{sid}/scores")
        assert resp.status_code == 409
        assert resp.json()["code"] == "no_theoretical_optimal"


class TestCellEdits:
    def test_latency_cost_delta(self, client):
        sid = open_session(client)
        resp = client.patch(f"/sessions/{sid}/cells", json=LAT_COST_ZERO)
        assert resp.status_code == 200
        body = resp.json()
        assert body["pair"] == {"dim_from": "T", "dim_to": "Ec"}
        assert body["old_raw"] == 11.0
        assert body["new_raw"] == 18.0
        assert body["delta_raw"] == 7.0
        assert body["old_pct"] == pytest.approx(35.483870967741936)
        assert body["new_pct"] == pytest.approx(58.06451612903226)
        assert body["pair_scores"]["raw"]["serverless"] == 0.0

    def test_noop_edit_delta_zero(self, client):
        sid = open_session(client)
        body = client.patch(
            f"/sessions/{sid}/cells", json={**LAT_COST_ZERO, "effect": -1}
        ).json()
        assert body["delta_raw"] == 0.0
        assert body["delta_pct"] == 0.0

    def test_port_to_vi_swing(self, client):
        # portability -> vendor_independence goes -1 to +1: delta = (2+1)*2 = 6
        sid = open_session(client)
        body = client.patch(
            f"/sessions/{sid}/cells",
            json={
                "alternative": "serverless",
                "dim_from": "T",
                "dim_to": "Ec",
                "row": "portability",
                "col": "vendor_independence",
                "effect": 1,
            },
        ).json()
        assert body["delta_raw"] == 6.0

    def test_last_write_wins(self, client):
        sid = open_session(client)
        client.patch(f"/sessions/{sid}/cells", json={**LAT_COST_ZERO, "effect": 1})
        client.patch(f"/sessions/{sid}/cells", json=LAT_COST_ZERO)
        pending = pair_scores(client, sid, "T", "Ec", pending=True)
        assert pending["raw"]["containerization"] == 18.0

    def test_optimal_readonly(self, client):
        sid = open_session(client)
        resp = client.patch(
            f"/sessions/{sid}/cells",
            json={**LAT_COST_ZERO, "alternative": "theoretical_optimal"},
        )
        assert resp.status_code == 403
        assert resp.json()["code"] == "optimal_readonly"

    def test_unknown_cell(self, client):
        sid = open_session(client)
        resp = client.patch(
            f"/sessions/{sid}/cells", json={**LAT_COST_ZERO, "col": "ghost"}
        )
        assert resp.status_code == 404
        assert resp.json()["code"] == "unknown_cell"

    def test_invalid_effect(self, client):
        sid = open_session(client)
        resp = client.patch(
            f"/sessions/{sid}/cells", json={**LAT_COST_ZERO, "effect": 2}
        )
        assert resp.status_code == 400
        assert resp.json()["code"] == "invalid_effect"

    def test_missing_fields(self, client):
        sid = open_session(client)
        resp = client.patch(f"/sessions/{sid}/cells", json={"effect": 0})
        assert resp.status_code == 400
        assert resp.json()["code"] == "invalid_body"


class TestCommitReset:
    def test_reset_discards_pending(self, client):
        sid = open_session(client)
        client.patch(f"/sessions/{sid}/cells", json=LAT_COST_ZERO)
        resp = client.post(f"/sessions/{sid}/reset")
        assert resp.json() == {"status": "reset"}
        pending = pair_scores(client, sid, "T", "Ec", pending=True)
        assert pending["raw"]["containerization"] == 11.0

    def test_commit_folds_into_baseline(self, client):
        sid = open_session(client)
        client.patch(f"/sessions/{sid}/cells", json=LAT_COST_ZERO)
        resp = client.post(f"/sessions/{sid}/commit")
        assert resp.json() == {"status": "committed"}
        committed = pair_scores(client, sid, "T", "Ec", pending=False)
        assert committed["raw"]["containerization"] == 18.0
        # reset after commit is a no-op: the edit is part of the baseline now
        client.post(f"/sessions/{sid}/reset")
        assert pair_scores(client, sid, "T", "Ec")["raw"]["containerization"] == 18.0

    def test_commit_writes_snapshot(self, tmp_path):
        client = TestClient(create_app(snapshot_dir=str(tmp_path)))
        sid = open_session(client)
        client.patch(f"/sessions/{sid}/cells", json=LAT_COST_ZERO)
        client.post(f"/sessions/{sid}/commit")
        snapshot = json.loads((tmp_path / f"{sid}.json").read_text())
        ctn = next(a for a in snapshot["alternatives"] if a["id"] == "containerization")
        matrix = next(
            m for m in ctn["matrices"] if m["dim_from"] == "T" and m["dim_to"] == "Ec"
        )
        row = matrix["row_qas"].index("latency")
        col = matrix["col_qas"].index("cost_efficiency")
        assert matrix["effects"][row][col] == 0


class TestIsolation:
    def test_sessions_do_not_share_edits(self, client):
        a = open_session(client)
        b = open_session(client)
        client.patch(f"/sessions/{a}/cells", json=LAT_COST_ZERO)
        assert pair_scores(client, a, "T", "Ec", pending=True)["raw"]["containerization"] == 18.0
        assert pair_scores(client, b, "T", "Ec", pending=True)["raw"]["containerization"] == 11.0


class TestAnalysis:
    def test_case_study_analysis(self, client):
        sid = open_session(client, "case_study", raw_priorities=False)
        resp = client.get(f"/sessions/{sid}/analysis")
        assert resp.status_code == 200
        multi = next(
            a for a in resp.json()["alternatives"] if a["alternative"] == "multi_model"
        )
        within = {
            (t["from"], t["to"]) for t in multi["tradeoffs"] if t["same_dimension"]
        }
        assert within == {
            ("adaptability", "reproducibility"),
            ("variability", "reproducibility"),
        }
        assert multi["most_affected"][0]["qa"] == "resource_utilization"
        assert any(len(c["path"]) >= 4 for c in multi["chains"])

    def test_analysis_respects_pending_flag(self, client):
        sid = open_session(client, "case_study", raw_priorities=False)
        # both length-3 cascades end on this edge; zeroing it breaks them
        client.patch(
            f"/sessions/{sid}/cells",
            json={
                "alternative": "multi_model",
                "dim_from": "Ec",
                "dim_to": "Ec",
                "row": "stake_of_beneficiary",
                "col": "monetary_cost",
                "effect": 0,
            },
        )
        baseline = client.get(f"/sessions/{sid}/analysis", params={"pending": False}).json()
        pending = client.get(f"/sessions/{sid}/analysis", params={"pending": True}).json()

        def longest(doc):
            multi = next(
                a for a in doc["alternatives"] if a["alternative"] == "multi_model"
            )
            return max(len(c["path"]) for c in multi["chains"])

        assert longest(baseline) == 4
        assert longest(pending) < 4
