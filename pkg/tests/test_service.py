import pytest
from fastapi.testclient import TestClient

from disturbmon.pipeline import DisturbTrace, write_trace_csv
from disturbmon.service import create_app
from disturbmon.synth import synthesize


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


@pytest.fixture(scope="module")
def cutin_csv(tmp_path_factory):
    g = synthesize(1, seed=90)
    item = DisturbTrace(g.trace, "01", 1, g.bindings["SV"], g.bindings["POV"],
                        *g.trace.domain)
    path = tmp_path_factory.mktemp("svc") / "pair.csv"
    write_trace_csv(item, path)
    return path.read_text(), g


def upload(client, csv_text, name="cutin"):
    sid = client.post("/sessions").json()["session"]
    r = client.post(f"/sessions/{sid}/traces", json={"name": name, "csv": csv_text})
    assert r.status_code == 200
    return sid, r.json()


def test_health(client):
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json() == {"status": "ok"}


def test_atoms_lists_signatures(client):
    atoms = {a["name"]: a for a in client.get("/atoms").json()["atoms"]}
    assert atoms["rssViolation"]["kinds"] == ["vehicle", "vehicle"]
    assert atoms["danger"]["macro"] is True
    assert "v_gt" in atoms


def test_parse_returns_ast_with_preorder_ids(client):
    r = client.post("/parse", json={"text":
                                    "initSafe(SV,POV) & (laneKeep(SV,L) U danger(SV,POV))"})
    assert r.status_code == 200
    body = r.json()
    assert body["errors"] == []
    ids = [n["id"] for n in body["ast"]]
    assert ids == list(range(len(ids)))
    assert len(ids) >= 3


def test_parse_error_has_position(client):
    r = client.post("/parse", json={"text": "G[3,2] true"})
    assert r.status_code == 400
    detail = r.json()["detail"]
    assert detail["kind"] == "MalformedInterval"
    assert isinstance(detail["position"], int)


def test_parse_empty_body_rejected(client):
    assert client.post("/parse", json={"text": "   "}).status_code == 400


def test_evaluate_series_lengths(client, cutin_csv):
    csv_text, g = cutin_csv
    sid, meta = upload(client, csv_text)
    r = client.post("/evaluate", json={
        "session": sid, "trace": "cutin",
        "formula": "initSafe(SV,POV) & (laneKeep(SV,L) U danger(SV,POV))",
        "bindings": {"SV": "sv", "POV": "pov", "L": g.bindings["L"]},
    })
    assert r.status_code == 200
    body = r.json()
    assert body["verdict"] is True
    n = meta["samples"]
    assert len(body["times"]) == n
    assert len(body["robustness_series"]) == n
    assert all(len(v) == n for v in body["subformula_series"].values())
    assert set(body["subformula_series"]) \
        == {str(node["id"]) for node in body["ast"]}


def test_evaluate_is_pure(client, cutin_csv):
    csv_text, g = cutin_csv
    sid, _ = upload(client, csv_text)
    req = {"session": sid, "trace": "cutin", "formula": "F rssViolation(SV,POV)",
           "bindings": {"SV": "sv", "POV": "pov"}}
    a = client.post("/evaluate", json=req)
    b = client.post("/evaluate", json=req)
    assert a.content == b.content


def test_evaluate_unknown_trace_404(client):
    sid = client.post("/sessions").json()["session"]
    r = client.post("/evaluate", json={"session": sid, "trace": "nope",
                                       "formula": "true"})
    assert r.status_code == 404


def test_evaluate_bad_binding_400(client, cutin_csv):
    csv_text, _ = cutin_csv
    sid, _ = upload(client, csv_text)
    r = client.post("/evaluate", json={
        "session": sid, "trace": "cutin", "formula": "v_gt(SV,5)",
        "bindings": {"SV": "missing-vehicle"}})
    assert r.status_code == 400


def test_sessions_are_isolated(client, cutin_csv):
    csv_text, _ = cutin_csv
    sid_a, _ = upload(client, csv_text, "mine")
    sid_b = client.post("/sessions").json()["session"]
    r = client.post("/evaluate", json={"session": sid_b, "trace": "mine",
                                       "formula": "true"})
    assert r.status_code == 404


def test_exemplify_success_and_failure(client):
    ok = client.post("/exemplify", json={"formula": "F(v_gt(SV,5))",
                                         "seed": 4, "budget": 10})
    assert ok.status_code == 200
    body = ok.json()
    assert body["robustness"] > 0
    assert max(body["trace"]["vehicles"]["SV"]["channels"]["v"]) > 5.0

    bad = client.post("/exemplify", json={
        "formula": "v_gt(SV,5) & !v_gt(SV,5)", "seed": 4, "budget": 2})
    assert bad.status_code == 422
    assert bad.json()["detail"]["best_robustness"] <= 0


def test_exemplify_difference_of_variants(client):
    # A trace matching the relaxed cut-in but not the strict one: the
    # entering vehicle ends up behind the subject.
    r = client.post("/exemplify", json={
        "formula": "F v_gt(SV,5)",
        "exclude": "G v_gt(SV,5)",
        "seed": 7, "budget": 30,
    })
    assert r.status_code == 200
    vs = r.json()["trace"]["vehicles"]["SV"]["channels"]["v"]
    assert max(vs) > 5.0 and min(vs) <= 5.0


def test_snapshots_round_trip(client):
    sid = client.post("/sessions").json()["session"]
    r = client.post(f"/sessions/{sid}/snapshots",
                    json={"name": "before", "text": "F v_gt(SV,5)"})
    assert r.status_code == 200
    listed = client.get(f"/sessions/{sid}/snapshots").json()["snapshots"]
    assert listed == [{"name": "before", "text": "F v_gt(SV,5)"}]
    bad = client.post(f"/sessions/{sid}/snapshots",
                      json={"name": "x", "text": "G[3,2] p()"})
    assert bad.status_code == 400


def test_upload_size_cap(client):
    sid = client.post("/sessions").json()["session"]
    r = client.post(f"/sessions/{sid}/traces",
                    json={"name": "big", "csv": "x" * (10 * 1024 * 1024 + 1)})
    assert r.status_code == 413
