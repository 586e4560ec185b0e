import pytest
from fastapi.testclient import TestClient

from acroverify.errors import LookupMiss
from acroverify.service import create_app


@pytest.fixture()
def client(mini_index, dictionary_backend):
    app = create_app(mini_index, backend=dictionary_backend)
    return TestClient(app, raise_server_exceptions=False)


def test_healthz(client, mini_index):
    resp = client.get("/healthz")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok", "index_docs": mini_index.doc_count}


def test_verify_ok(client):
    resp = client.post("/api/verify", json={"lf": "cardiopulmonary resuscitation", "sf": "CPR"})
    assert resp.status_code == 200
    assert resp.json() == {
        "status": "verified",
        "sources": ["d01", "d02"],
        "threshold": 2,
    }


def test_verify_unknown_pair(client):
    resp = client.post("/api/verify", json={"lf": "unknown term", "sf": "UT"})
    assert resp.status_code == 200
    assert resp.json() == {"status": "unverified", "sources": [], "threshold": 2}


def test_verify_threshold_param(client):
    resp = client.post(
        "/api/verify", json={"lf": "cardiopulmonary resuscitation", "sf": "CPR", "k": 3}
    )
    assert resp.json()["status"] == "unverified"


def test_verify_bad_request(client):
    resp = client.post("/api/verify", json={"lf": ""})
    assert resp.status_code == 400
    body = resp.json()
    assert body["code"] == "bad_request"
    assert body["http_status"] == 400
    assert "message" in body

    assert client.post("/api/verify", content=b"not json").status_code == 400
    assert client.post("/api/verify", json={"lf": "x", "sf": "Y", "k": 0}).status_code == 400


def test_translate_cpr_fixture(client):
    resp = client.post(
        "/api/translate", json={"fr_lf": "réanimation cardiopulmonaire", "fr_sf": "RCP"}
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["chosen_sf"] == "CPR"
    assert body["en_lf"] == "cardiopulmonary resuscitation"
    assert body["path"] == "mt_verified"
    assert body["verification"] == {
        "status": "verified",
        "sources": ["d01", "d02"],
        "threshold": 2,
    }
    assert body["n_best"] == []


def test_translate_candidate_path_lists_n_best(mini_index, overlay_backend):
    client = TestClient(create_app(mini_index, backend=overlay_backend))
    resp = client.post(
        "/api/translate",
        json={"fr_lf": "artériopathie oblitérante des membres inférieurs", "fr_sf": "AOMI"},
    )
    body = resp.json()
    assert body["path"] == "candidate_verified"
    assert body["chosen_sf"] == "PAD"
    assert body["mt_sf"] == "PAAD"
    top = body["n_best"][0]
    assert top == {
        "sf": "PAD",
        "score": 0.0,
        "origin": "token_initial",
        "status": "verified",
        "sources": ["d13", "d14"],
    }


def test_translate_dictionary_miss_is_502(client):
    resp = client.post("/api/translate", json={"fr_lf": "mot inconnu", "fr_sf": "MI"})
    assert resp.status_code == 502
    assert resp.json()["code"] == "backend_unavailable"


def test_translate_missing_field_is_400(client):
    resp = client.post("/api/translate", json={"fr_lf": "réanimation cardiopulmonaire"})
    assert resp.status_code == 400


def test_translate_without_backend(mini_index):
    client = TestClient(create_app(mini_index, backend=None))
    resp = client.post("/api/translate", json={"fr_lf": "x", "fr_sf": "XY"})
    assert resp.status_code == 502


def test_sf_lookup_ambiguous(client):
    resp = client.get("/api/sf", params={"lf": "emergency department"})
    assert resp.status_code == 200
    assert resp.json() == {
        "sfs": [
            {"sf": "ED", "source_count": 2, "sources": ["d19", "d20"]},
            {"sf": "ER", "source_count": 1, "sources": ["d11"]},
        ]
    }


def test_sf_lookup_unknown(client):
    assert client.get("/api/sf", params={"lf": "nothing here"}).json() == {"sfs": []}


def test_sf_lookup_empty_is_400(client):
    assert client.get("/api/sf").status_code == 400
    assert client.get("/api/sf", params={"lf": "  "}).status_code == 400


def test_unknown_route_is_api_error_json(client):
    resp = client.get("/api/nope")
    assert resp.status_code == 404
    body = resp.json()
    assert body["code"] == "not_found"
    assert body["http_status"] == 404


def test_internal_errors_do_not_leak(mini_index):
    class Exploding:
        def translate(self, req):
            raise RuntimeError("secret stack detail")

    client = TestClient(create_app(mini_index, backend=Exploding()),
                        raise_server_exceptions=False)
    resp = client.post("/api/translate", json={"fr_lf": "x", "fr_sf": "XY"})
    assert resp.status_code == 500
    body = resp.json()
    assert body["code"] == "internal"
    assert "secret" not in body["message"]


def test_static_assets_served(tmp_path, mini_index):
    (tmp_path / "index.html").write_text("<html><body>console</body></html>")
    client = TestClient(create_app(mini_index, static_dir=tmp_path))
    resp = client.get("/")
    assert resp.status_code == 200
    assert "console" in resp.text


def test_lookup_miss_maps_to_502(mini_index):
    class Missing:
        def translate(self, req):
            raise LookupMiss("key")

    client = TestClient(create_app(mini_index, backend=Missing()))
    resp = client.post("/api/translate", json={"fr_lf": "x", "fr_sf": "XY"})
    assert resp.status_code == 502
