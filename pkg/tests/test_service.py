"""HTTP service: staged runs, error envelope, digests, persistence."""

import json

import pytest
from fastapi.testclient import TestClient

from mwcsense import ReconstructionIllPosed, demo_scenario, prototype_config, true_support
from mwcsense.serialization import config_to_json, scenario_to_json, sha256_hex
from mwcsense.service import create_app, _envelope


@pytest.fixture(scope="module")
def scenario_doc():
    return json.loads(scenario_to_json(demo_scenario(duration_s=2e-4)))


@pytest.fixture(scope="module")
def config_doc():
    return json.loads(config_to_json(prototype_config()))


@pytest.fixture()
def client():
    return TestClient(create_app())


def run_all_stages(client, scenario_doc, config_doc):
    rid = client.post("/v1/runs", json=scenario_doc).json()["run_id"]
    sample = client.post(f"/v1/runs/{rid}/sample", json={"config": config_doc}).json()
    recover = client.post(f"/v1/runs/{rid}/recover", json={}).json()
    recon = client.post(f"/v1/runs/{rid}/reconstruct").json()
    return rid, sample, recover, recon


def test_staged_flow(client, scenario_doc, config_doc):
    created = client.post("/v1/runs", json=scenario_doc)
    assert created.status_code == 201
    rid = created.json()["run_id"]
    assert created.json()["stage"] == 1

    sample = client.post(f"/v1/runs/{rid}/sample", json={"config": config_doc})
    assert sample.status_code == 200
    body = sample.json()
    assert body["stage"] == 2
    assert body["matrix_shape"] == [12, 111]
    assert set(body["digests"]) == {"samples", "sensing_matrix", "bank"}
    assert len(body["plots"]["input_psd"]["frequency_hz"]) <= 1024

    recover = client.post(f"/v1/runs/{rid}/recover", json={}).json()
    assert recover["stage"] == 3
    scen = demo_scenario(duration_s=2e-4)
    truth = sorted(true_support(scen, 20e6, 55))
    assert recover["support"] == truth
    assert recover["true_support"] == truth
    assert recover["diagnostics"]["n_iterations"] >= 1

    recon = client.post(f"/v1/runs/{rid}/reconstruct")
    body = recon.json()
    assert body["stage"] == 4 and body["cached"] is False
    assert len(body["carriers_hz"]) == 3
    assert all(c["correlation"] > 0.9 for c in body["band_correlations"])

    view = client.get(f"/v1/runs/{rid}").json()
    assert view["stage"] == 4
    assert set(view["artifacts"]) == {"samples.bin", "holes.csv", "reconstruction.bin"}


def test_reconstruct_is_idempotent_and_cached(client, scenario_doc, config_doc):
    rid, _, _, first = run_all_stages(client, scenario_doc, config_doc)
    again = client.post(f"/v1/runs/{rid}/reconstruct").json()
    assert again["cached"] is True
    assert again["digests"] == first["digests"]


def test_identical_runs_share_digests(client, scenario_doc, config_doc):
    _, s1, _, r1 = run_all_stages(client, scenario_doc, config_doc)
    _, s2, _, r2 = run_all_stages(client, scenario_doc, config_doc)
    assert s1["digests"] == s2["digests"]
    assert r1["digests"] == r2["digests"]


def test_resampling_invalidates_later_stages(client, scenario_doc, config_doc):
    rid, _, _, _ = run_all_stages(client, scenario_doc, config_doc)
    body = client.post(
        f"/v1/runs/{rid}/sample", json={"config": config_doc, "bank_seed": 5}
    ).json()
    assert body["stage"] == 2
    view = client.get(f"/v1/runs/{rid}").json()
    assert view["recover"] is None and view["reconstruct"] is None
    assert view["artifacts"] == ["samples.bin"]


def test_unknown_run_is_404(client):
    r = client.get("/v1/runs/nope")
    assert r.status_code == 404
    body = r.json()
    assert body["code"] == "not-found"
    assert body["details"]["run_id"] == "nope"


def test_bad_scenario_is_422(client, scenario_doc):
    bad = dict(scenario_doc)
    bad["bands"] = [dict(b, carrier_hz=2e9) for b in bad["bands"]]
    r = client.post("/v1/runs", json=bad)
    assert r.status_code == 422
    assert r.json()["code"] == "invalid-scenario"
    assert r.json()["details"]


def test_non_object_body_is_invalid_request(client):
    r = client.post("/v1/runs", json=[1, 2, 3])
    assert r.status_code == 422
    assert r.json()["code"] == "invalid-request"
    assert "errors" in r.json()["details"]


def test_sample_requires_config_key(client, scenario_doc):
    rid = client.post("/v1/runs", json=scenario_doc).json()["run_id"]
    r = client.post(f"/v1/runs/{rid}/sample", json={"bank_seed": 1})
    assert r.status_code == 422
    assert r.json()["code"] == "invalid-argument"


def test_stage_order_is_enforced(client, scenario_doc):
    rid = client.post("/v1/runs", json=scenario_doc).json()["run_id"]
    for path in ("recover", "reconstruct"):
        r = client.post(f"/v1/runs/{rid}/{path}")
        assert r.status_code == 409
        assert r.json()["code"] == "conflict"


def test_ill_posed_maps_to_409():
    resp = _envelope(ReconstructionIllPosed("too many slices", {"n": 13}))
    assert resp.status_code == 409


def test_zero_sparsity_reports_full_band_hole(client, scenario_doc, config_doc):
    rid = client.post("/v1/runs", json=scenario_doc).json()["run_id"]
    client.post(f"/v1/runs/{rid}/sample", json={"config": config_doc})
    rec = client.post(f"/v1/runs/{rid}/recover", json={"sparsity": 0}).json()
    assert rec["support"] == []
    assert rec["holes_positive_hz"] == [[0.0, 1.11e9]]

    recon = client.post(f"/v1/runs/{rid}/reconstruct").json()
    assert recon["carriers_hz"] == []
    assert recon["rms"] == 0.0


def test_artifact_downloads(client, scenario_doc, config_doc):
    rid, sample, _, recon = run_all_stages(client, scenario_doc, config_doc)
    holes = client.get(f"/v1/runs/{rid}/artifacts/holes.csv")
    assert holes.status_code == 200
    assert holes.headers["content-type"].startswith("text/csv")
    assert holes.text.splitlines()[0] == "start_hz,end_hz"

    blob = client.get(f"/v1/runs/{rid}/artifacts/samples.bin")
    assert blob.headers["content-type"] == "application/octet-stream"
    assert sha256_hex(blob.content) == sample["digests"]["samples"]

    wave = client.get(f"/v1/runs/{rid}/artifacts/reconstruction.bin")
    assert sha256_hex(wave.content) == recon["digests"]["reconstruction"]

    missing = client.get(f"/v1/runs/{rid}/artifacts/nope.bin")
    assert missing.status_code == 404
    assert "samples.bin" in missing.json()["details"]["available"]


def test_store_round_trip(tmp_path, scenario_doc, config_doc):
    first = TestClient(create_app(store_dir=tmp_path))
    rid, _, recover, recon = run_all_stages(first, scenario_doc, config_doc)

    revived = TestClient(create_app(store_dir=tmp_path))
    view = revived.get(f"/v1/runs/{rid}").json()
    assert view["stage"] == 4
    assert view["recover"]["support"] == recover["support"]

    cached = revived.post(f"/v1/runs/{rid}/reconstruct").json()
    assert cached["cached"] is True
    assert cached["digests"] == recon["digests"]

    blob = revived.get(f"/v1/runs/{rid}/artifacts/reconstruction.bin")
    assert sha256_hex(blob.content) == recon["digests"]["reconstruction"]
