from pathlib import Path

import pytest
from fastapi import FastAPI
from fastapi.testclient import TestClient

from routes import sweep_routes
from routes.routes_mapping import include_routes


@pytest.fixture
def client(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> TestClient:
    monkeypatch.setattr(sweep_routes, "OUTPUT_DIR", tmp_path)
    app = FastAPI()
    include_routes(app)
    return TestClient(app)


def test_run_writes_csv_and_plot(client: TestClient, tmp_path: Path) -> None:
    response = client.post("/sweep/run", json={
        "modulation": "qpsk",
        "ebn0_db": [0, 10, 2],
        "sources": ["theory", "oracle"],
    })
    assert response.status_code == 200
    body = response.json()
    assert len(body["rows"]) == 12
    assert body["rows"][0]["source"] == "theory"
    assert body["rows"][0]["seed"] == ""
    assert Path(body["csv"]).parent == tmp_path / body["job_id"]
    assert Path(body["csv"]).read_text(encoding="utf-8").startswith("modulation,channel,source,")
    assert Path(body["plot"]).exists()


def test_run_with_simulation(client: TestClient) -> None:
    response = client.post("/sweep/run", json={
        "modulation": "bpsk",
        "channel": "rayleigh",
        "ebn0_db": [0, 4, 2],
        "sources": ["sim"],
        "seed": 4,
        "rule": {"min_symbol_errors": 20, "max_symbols": 5000, "batch_size": 1000},
    })
    assert response.status_code == 200
    rows = response.json()["rows"]
    assert [r["seed"] for r in rows] == ["4", "4", "4"]


@pytest.mark.parametrize("body", [
    {"channel": "identity"},
    {"modulation": "qam32"},
    {"ebn0_db": [0, 10, 0]},
    {"sources": []},
    {"rule": {"max_symbols": 10, "batch_size": 100}},
])
def test_run_rejects_bad_config(client: TestClient, tmp_path: Path, body: dict) -> None:
    assert client.post("/sweep/run", json=body).status_code == 422
    assert not any(tmp_path.iterdir())


def test_report(client: TestClient) -> None:
    response = client.get("/sweep/report", params={"M": 16, "snr_db": 20.0})
    assert response.status_code == 200
    row = response.json()
    assert row["M"] == 16
    assert row["gamma_bar"] == pytest.approx(100.0)
    assert abs(row["relative_deviation"]) <= 1e-8


def test_report_bad_order(client: TestClient) -> None:
    assert client.get("/sweep/report", params={"M": 8}).status_code == 400
