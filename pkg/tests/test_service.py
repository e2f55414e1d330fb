import json

import pytest
from fastapi.testclient import TestClient

from edulens import artifacts
from edulens.service import RunSnapshot, SnapshotError, create_app

from .conftest import run_cli


@pytest.fixture(scope="session")
def client(mini_run):
    snapshot = RunSnapshot.load(mini_run)
    return TestClient(create_app(snapshot))


class TestEndpoints:
    def test_topics(self, client):
        response = client.get("/topics")
        assert response.status_code == 200
        assert response.json() == {"topics": ["synth"]}

    def test_students_listing_with_aggregates(self, client):
        body = client.get("/students").json()
        assert body["topic"] == "synth"
        assert len(body["students"]) == 20
        entry = body["students"][0]
        assert set(entry["aggregate"]) == {
            "avg_accuracy",
            "concept_count",
            "total_attempts",
            "median_week",
        }

    def test_students_unknown_topic_404(self, client):
        assert client.get("/students", params={"topic": "nope"}).status_code == 404

    def test_student_graph(self, client, mini_run):
        body = client.get("/students/s0001/graph").json()
        assert body["student"] == "s0001"
        bundle = artifacts.read_json(mini_run / "graphs.json")
        expected = next(g for g in bundle["graphs"] if g["student"] == "s0001")
        assert body == expected

    def test_student_graph_unknown_404(self, client):
        response = client.get("/students/ghost/graph")
        assert response.status_code == 404
        assert "ghost" in response.json()["detail"]

    def test_student_aggregate(self, client, mini_run):
        body = client.get("/students/s0002/aggregate").json()
        expected = artifacts.read_json(mini_run / "aggregates.json")["aggregates"]["s0002"]
        assert body["aggregate"] == expected

    def test_projection_matches_cli_artifact(self, client, mini_run):
        assert client.get("/projection").json() == artifacts.read_json(
            mini_run / "projection.json"
        )

    def test_neighbors_matches_cli_output(self, client, mini_run):
        cli = json.loads(
            run_cli("neighbors", "--out", mini_run, "--student", "s0003", "--k", 4).output
        )
        assert client.get("/neighbors", params={"student": "s0003", "k": 4}).json() == cli

    def test_neighbors_unknown_student_404(self, client):
        assert client.get("/neighbors", params={"student": "ghost", "k": 2}).status_code == 404

    def test_neighbors_bad_k_400(self, client):
        response = client.get("/neighbors", params={"student": "s0001", "k": 99})
        assert response.status_code == 400
        assert "out of range" in response.json()["detail"]

    def test_cohort_matches_cli_output(self, client, mini_run):
        cli = json.loads(
            run_cli(
                "cohort", "--out", mini_run, "--start", "s0001", "--end", "s0005", "--k", 3
            ).output
        )
        response = client.post("/cohort", json={"start": "s0001", "end": "s0005", "k": 3})
        assert response.json() == cli

    def test_cohort_same_endpoints_400(self, client):
        response = client.post("/cohort", json={"start": "s0001", "end": "s0001", "k": 2})
        assert response.status_code == 400

    def test_cohort_unknown_endpoint_404(self, client):
        response = client.post("/cohort", json={"start": "s0001", "end": "zzz", "k": 2})
        assert response.status_code == 404

    def test_outliers_matches_cli_output(self, client, mini_run):
        cli = json.loads(run_cli("outliers", "--out", mini_run, "--k", 4).output)
        assert client.get("/outliers", params={"k": 4}).json() == cli

    def test_outliers_bad_k_400(self, client):
        assert client.get("/outliers", params={"k": 0}).status_code == 400

    def test_repeated_requests_identical(self, client):
        first = client.get("/neighbors", params={"student": "s0004", "k": 5})
        second = client.get("/neighbors", params={"student": "s0004", "k": 5})
        assert first.content == second.content


class TestSnapshot:
    def test_inconsistent_student_sets_refused(self, mini_run, tmp_path):
        broken = tmp_path / "broken"
        broken.mkdir()
        for name in ["curriculum.json", "graphs.json", "aggregates.json",
                     "embeddings.json", "projection.json"]:
            (broken / name).write_bytes((mini_run / name).read_bytes())
        store_doc = artifacts.read_json(broken / "embeddings.json")
        store_doc["students"] = store_doc["students"][:-1]
        store_doc["embeddings"] = store_doc["embeddings"][:-1]
        artifacts.write_json(broken / "embeddings.json", store_doc)
        with pytest.raises(SnapshotError, match="student sets disagree"):
            RunSnapshot.load(broken)

    def test_topic_mismatch_refused(self, mini_run, tmp_path):
        broken = tmp_path / "broken-topic"
        broken.mkdir()
        for name in ["curriculum.json", "graphs.json", "aggregates.json",
                     "embeddings.json", "projection.json"]:
            (broken / name).write_bytes((mini_run / name).read_bytes())
        doc = artifacts.read_json(broken / "projection.json")
        doc["topic"] = "other"
        artifacts.write_json(broken / "projection.json", doc)
        with pytest.raises(SnapshotError, match="disagree on topic"):
            RunSnapshot.load(broken)

    def test_static_assets_served_when_configured(self, mini_run, tmp_path):
        static = tmp_path / "assets"
        static.mkdir()
        (static / "index.html").write_text("<html><body>explorer</body></html>")
        snapshot = RunSnapshot.load(mini_run)
        client = TestClient(create_app(snapshot, static_dir=static))
        response = client.get("/")
        assert response.status_code == 200
        assert "explorer" in response.text
        # API routes still take precedence over the static mount
        assert client.get("/topics").json() == {"topics": ["synth"]}
