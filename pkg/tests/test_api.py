"""HTTP 接口"""

import json

import pytest
from fastapi.testclient import TestClient

from cornerlab.cli import EXIT_OK, main
from main import app


@pytest.fixture
def client():
    return TestClient(app)


def test_health(client):
    assert client.get("/api/health").json() == {"message": "OK"}
    status = client.get("/api/status").json()
    assert status["app_name"] == "cornerlab"
    assert "toy" in status["profiles"]


def test_root(client):
    assert "cornerlab" in client.get("/").json()["message"]


def test_corner_count(client):
    body = {"set": {"N": 3, "points": [[1, 1], [2, 1], [1, 2]]}}
    report = client.post("/api/corners/count", json=body).json()
    assert report["report"] == "corners-count"
    assert report["count"] == 1


def test_one_based_payload(client):
    body = {"set": {"N": 3, "points": [[2, 2], [3, 2], [2, 3]], "one_based": True}}
    assert client.post("/api/corners/count", json=body).json()["count"] == 1


def test_behrend_embedding(client):
    report = client.post("/api/corners/behrend", json={"k": 2, "n_grid": 6}).json()
    assert report["values"] == [1, 2]
    assert report["embedding"] == {"N": 6, "rule": "translation", "size": 4, "density": 4 / 36, "corners": 0}


def test_uniformity_of_line_set(client):
    body = {"set": {"N": 4, "points": [[0], [2]]}}
    assert client.post("/api/uniformity", json=body).json()["normalization"] == "line"


def test_hunt_with_asymptotic_profile_is_rejected(client):
    body = {"set": {"N": 4, "points": [[0, 0]]}, "profile": "asymptotic"}
    response = client.post("/api/hunt", json=body)
    assert response.status_code == 400
    assert "asymptotic" in response.json()["detail"]


def test_bad_point_is_rejected(client):
    response = client.post("/api/corners/count", json={"set": {"N": 2, "points": [[0, 5]]}})
    assert response.status_code == 400


def test_spectrum_needs_grid(client):
    response = client.post("/api/spectrum", json={"set": {"N": 3, "points": [[1]]}})
    assert response.status_code == 400


def test_partition_ap(client):
    report = client.post("/api/partition/ap", json={"N": 16, "r1": 1, "r2": 0, "s": 16}).json()
    assert report["problems"] == []
    assert report["step"] == 1


@pytest.mark.parametrize(
    "command, route, extra",
    [
        (["uniformity", "--normalization", "box"], "/api/uniformity", {"normalization": "box"}),
        (["uniformity"], "/api/uniformity", {}),
        (["spectrum"], "/api/spectrum", {}),
    ],
)
def test_reports_match_command_line(client, tmp_path, capsys, command, route, extra):
    path = tmp_path / "a.txt"
    path.write_text("N 4\n0 0\n1 2\n3 3\n2 1\n", encoding="utf-8")
    assert main([command[0], "--in", str(path), *command[1:]]) == EXIT_OK
    expected = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    body = {"set": {"N": 4, "points": [[0, 0], [1, 2], [3, 3], [2, 1]]}, **extra}
    assert client.post(route, json=body).json() == expected
