import threading
import time

import pytest
import requests

from acroverify.errors import (
    LookupMiss,
    MtHttpStatusError,
    MtNetworkError,
    MtProtocolError,
    MtRateLimited,
    MtTimeout,
)
from acroverify.mt import (
    DictionaryBackend,
    EchoBackend,
    HttpBackend,
    MtRequest,
    parse_lf_sf,
    translate,
)


def test_request_invariants():
    with pytest.raises(ValueError):
        MtRequest(text="", src="fr", tgt="en")
    with pytest.raises(ValueError):
        MtRequest(text="x", src="en", tgt="en")


def test_echo_backend():
    req = MtRequest("réanimation cardiopulmonaire (RCP)", "fr", "en")
    assert EchoBackend().translate(req) == "réanimation cardiopulmonaire (RCP)"


def test_dictionary_backend(dictionary_backend):
    req = MtRequest("acide désoxyribonucléique (ADN)", "fr", "en")
    assert dictionary_backend.translate(req) == "deoxyribonucleic acid (DNA)"
    # keys are normalized, so case and spacing do not matter
    req2 = MtRequest("Acide  Désoxyribonucléique (adn)", "fr", "en")
    assert dictionary_backend.translate(req2) == "deoxyribonucleic acid (DNA)"


def test_dictionary_miss(dictionary_backend):
    with pytest.raises(LookupMiss):
        dictionary_backend.translate(MtRequest("mot inconnu (MI)", "fr", "en"))


def test_dictionary_overlay_wins(overlay_backend):
    req = MtRequest("artériopathie oblitérante des membres inférieurs (AOMI)", "fr", "en")
    assert overlay_backend.translate(req) == "peripheral artery disease (PAAD)"
    # entries outside the overlay are untouched
    req2 = MtRequest("réanimation cardiopulmonaire (RCP)", "fr", "en")
    assert overlay_backend.translate(req2) == "cardiopulmonary resuscitation (CPR)"


def test_dictionary_from_tsv(tmp_path):
    base = tmp_path / "dict.tsv"
    base.write_text("bonjour\thello\n", encoding="utf-8")
    overlay = tmp_path / "overlay.tsv"
    overlay.write_text("bonjour\thi\n", encoding="utf-8")
    backend = DictionaryBackend.from_tsv(base, overlays=[overlay])
    assert backend.translate(MtRequest("Bonjour", "fr", "en")) == "hi"


def test_parse_lf_sf_paper_example():
    parsed = parse_lf_sf("deoxyribonucleic acid (dna)")
    assert parsed.en_lf == "deoxyribonucleic acid"
    assert parsed.en_sf == "dna"
    assert not parsed.sf_suspect


def test_parse_lf_sf_without_parenthetical():
    parsed = parse_lf_sf("heart rate")
    assert parsed.en_lf == "heart rate"
    assert parsed.en_sf is None


def test_parse_lf_sf_last_parenthetical_wins():
    parsed = parse_lf_sf("alpha (a) beta (b)")
    assert parsed.en_lf == "alpha (a) beta"
    assert parsed.en_sf == "b"
    assert parsed.sf_suspect  # "b" is too short to be a plausible SF


def test_parse_lf_sf_never_empty_lf():
    parsed = parse_lf_sf("(dna)")
    assert parsed.en_lf == "(dna)"
    assert parsed.en_sf is None
    parsed = parse_lf_sf("   ")
    assert parsed.en_lf


def test_parse_lf_sf_suspect_flag():
    parsed = parse_lf_sf("large model (a very long expansion)")
    assert parsed.en_sf == "a very long expansion"
    assert parsed.sf_suspect


class _Resp:
    def __init__(self, status_code=200, body=None, text=""):
        self.status_code = status_code
        self._body = body
        self.text = text

    def json(self):
        if self._body is None:
            raise ValueError("no json")
        return self._body


def test_http_backend_success(monkeypatch):
    calls = {}

    def fake_post(url, json=None, headers=None, timeout=None):
        calls["url"], calls["json"] = url, json
        return _Resp(200, {"translation": "heart rate (HR)"})

    monkeypatch.setattr(requests, "post", fake_post)
    backend = HttpBackend("http://mt.local/translate")
    out = backend.translate(MtRequest("fréquence cardiaque (FC)", "fr", "en"))
    assert out == "heart rate (HR)"
    assert calls["json"] == {"text": "fréquence cardiaque (FC)", "src": "fr", "tgt": "en"}


def test_http_backend_auth_header(monkeypatch):
    seen = {}

    def fake_post(url, json=None, headers=None, timeout=None):
        seen["headers"] = headers
        return _Resp(200, {"translation": "x"})

    monkeypatch.setattr(requests, "post", fake_post)
    monkeypatch.setenv("MT_API_KEY", "sekret")
    backend = HttpBackend("http://mt.local", auth_header="X-Api-Key")
    backend.translate(MtRequest("a", "fr", "en"))
    assert seen["headers"] == {"X-Api-Key": "sekret"}


def test_http_backend_error_kinds(monkeypatch):
    backend = HttpBackend("http://mt.local")
    req = MtRequest("a", "fr", "en")

    monkeypatch.setattr(requests, "post",
                        lambda *a, **kw: (_ for _ in ()).throw(requests.Timeout("slow")))
    with pytest.raises(MtTimeout):
        backend.translate(req)

    monkeypatch.setattr(requests, "post",
                        lambda *a, **kw: (_ for _ in ()).throw(requests.ConnectionError("down")))
    with pytest.raises(MtNetworkError):
        backend.translate(req)

    monkeypatch.setattr(requests, "post", lambda *a, **kw: _Resp(500, text="boom"))
    with pytest.raises(MtHttpStatusError) as exc:
        backend.translate(req)
    assert not exc.value.retryable

    monkeypatch.setattr(requests, "post", lambda *a, **kw: _Resp(429))
    with pytest.raises(MtRateLimited) as exc:
        backend.translate(req)
    assert exc.value.retryable

    monkeypatch.setattr(requests, "post", lambda *a, **kw: _Resp(200, body=None))
    with pytest.raises(MtProtocolError):
        backend.translate(req)

    monkeypatch.setattr(requests, "post", lambda *a, **kw: _Resp(200, body={"nope": 1}))
    with pytest.raises(MtProtocolError):
        backend.translate(req)


def test_translate_retries_rate_limit(monkeypatch):
    attempts = []

    class Flaky:
        def translate(self, req):
            attempts.append(1)
            if len(attempts) < 3:
                raise MtRateLimited(429, "slow down")
            return "ok"

    assert translate(Flaky(), MtRequest("a", "fr", "en"), retries=2, backoff=0) == "ok"
    assert len(attempts) == 3


def test_translate_retry_budget_exhausted():
    class AlwaysLimited:
        def translate(self, req):
            raise MtRateLimited(429, "slow down")

    with pytest.raises(MtRateLimited):
        translate(AlwaysLimited(), MtRequest("a", "fr", "en"), retries=2, backoff=0)


def test_translate_non_retryable_surfaces_immediately():
    calls = []

    class Broken:
        def translate(self, req):
            calls.append(1)
            raise MtHttpStatusError(500, "boom")

    with pytest.raises(MtHttpStatusError):
        translate(Broken(), MtRequest("a", "fr", "en"), retries=5, backoff=0)
    assert len(calls) == 1


def test_http_backend_in_flight_cap(monkeypatch):
    active = []
    peak = []
    lock = threading.Lock()

    def fake_post(url, json=None, headers=None, timeout=None):
        with lock:
            active.append(1)
            peak.append(len(active))
        time.sleep(0.02)
        with lock:
            active.pop()
        return _Resp(200, {"translation": "x"})

    monkeypatch.setattr(requests, "post", fake_post)
    backend = HttpBackend("http://mt.local", max_in_flight=2)
    threads = [
        threading.Thread(
            target=backend.translate, args=(MtRequest(f"t{i}", "fr", "en"),)
        )
        for i in range(8)
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert max(peak) <= 2
