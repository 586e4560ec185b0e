"""Pluggable machine-translation backends plus the LF/SF output parser.

The paper-scale systems (Google, Opus) are reachable through HttpBackend;
desk-scale runs use DictionaryBackend seeded from a gold corpus, optionally
with error-overlay files that simulate observed MT failure modes.  The
combined "LF (SF)" string is translated as one unit and split afterwards.
"""

from __future__ import annotations

import os
import re
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import requests

from .corpus import GoldEntry, normalize_lf
from .errors import (
    LookupMiss,
    MtError,
    MtHttpStatusError,
    MtNetworkError,
    MtProtocolError,
    MtRateLimited,
    MtTimeout,
)
from .extraction import valid_short_form

API_KEY_ENV = "MT_API_KEY"

_INNER_PAREN = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True)
class MtRequest:
    text: str
    src: str
    tgt: str

    def __post_init__(self):
        if not self.text:
            raise ValueError("request text must be non-empty")
        if self.src == self.tgt:
            raise ValueError("source and target language must differ")


@dataclass(frozen=True)
class ParsedTranslation:
    """Split MT output: en_lf is never empty for non-empty input; en_sf is the
    contents of the last parenthesized span, flagged suspect when it does not
    look like a short form."""

    en_lf: str
    raw: str
    en_sf: str | None = None
    sf_suspect: bool = False


def parse_lf_sf(mt_output: str) -> ParsedTranslation:
    """Split MT output on its last parenthesized span."""
    matches = list(_INNER_PAREN.finditer(mt_output))
    fallback_lf = mt_output.strip() or mt_output
    if not matches:
        return ParsedTranslation(en_lf=fallback_lf, raw=mt_output)
    last = matches[-1]
    before = mt_output[: last.start()].strip()
    sf = last.group(1).strip()
    if not before or not sf:
        return ParsedTranslation(en_lf=before or fallback_lf, raw=mt_output)
    return ParsedTranslation(
        en_lf=before,
        raw=mt_output,
        en_sf=sf,
        sf_suspect=not valid_short_form(sf),
    )


class EchoBackend:
    """Identity backend for tests and plumbing checks."""

    def translate(self, req: MtRequest) -> str:
        return req.text


class DictionaryBackend:
    """Offline deterministic backend: exact lookup keyed by normalize_lf."""

    def __init__(self, mapping: Mapping[str, str]):
        self._mapping = {normalize_lf(src): tgt for src, tgt in mapping.items()}

    @classmethod
    def from_tsv(cls, path, overlays: Iterable = ()) -> "DictionaryBackend":
        """Load ``source \\t target`` rows; later overlay files win."""
        mapping: dict[str, str] = {}
        for file in (path, *overlays):
            for line in Path(file).read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                src, _, tgt = line.partition("\t")
                mapping[normalize_lf(src)] = tgt
        return cls(mapping)

    @classmethod
    def from_gold(cls, entries: Iterable[GoldEntry], overlays: Iterable = ()) -> "DictionaryBackend":
        """Seed fr->en pairs from a gold corpus, both "LF (SF)" and bare LF."""
        mapping: dict[str, str] = {}
        for e in entries:
            mapping[normalize_lf(f"{e.fr.lf} ({e.fr.sf})")] = f"{e.en.lf} ({e.en.sf})"
            mapping[normalize_lf(e.fr.lf)] = e.en.lf
        for file in overlays:
            for line in Path(file).read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                src, _, tgt = line.partition("\t")
                mapping[normalize_lf(src)] = tgt
        return cls(mapping)

    def translate(self, req: MtRequest) -> str:
        key = normalize_lf(req.text)
        try:
            return self._mapping[key]
        except KeyError:
            raise LookupMiss(key) from None


class HttpBackend:
    """POSTs {"text", "src", "tgt"} and expects {"translation": ...} back.

    Concurrent calls are capped by ``max_in_flight``.  HTTP 429/503 raise
    MtRateLimited (retryable); other non-2xx statuses, timeouts, and
    connection failures each raise their own error type.
    """

    RETRYABLE_STATUSES = (429, 503)

    def __init__(
        self,
        endpoint: str,
        auth_header: str | None = None,
        timeout: float = 10.0,
        max_in_flight: int = 4,
    ):
        self.endpoint = endpoint
        self.auth_header = auth_header
        self.timeout = timeout
        self._slots = threading.Semaphore(max_in_flight)

    def _headers(self) -> dict[str, str]:
        headers = {}
        api_key = os.environ.get(API_KEY_ENV)
        if self.auth_header and api_key:
            headers[self.auth_header] = api_key
        return headers

    def translate(self, req: MtRequest) -> str:
        payload = {"text": req.text, "src": req.src, "tgt": req.tgt}
        with self._slots:
            try:
                resp = requests.post(
                    self.endpoint, json=payload, headers=self._headers(), timeout=self.timeout
                )
            except requests.Timeout as exc:
                raise MtTimeout(str(exc)) from exc
            except requests.RequestException as exc:
                raise MtNetworkError(str(exc)) from exc
        if resp.status_code in self.RETRYABLE_STATUSES:
            raise MtRateLimited(resp.status_code, "rate limited")
        if not 200 <= resp.status_code < 300:
            raise MtHttpStatusError(resp.status_code, resp.text[:200])
        try:
            body = resp.json()
        except ValueError as exc:
            raise MtProtocolError(f"non-JSON reply: {exc}") from exc
        translation = body.get("translation") if isinstance(body, dict) else None
        if not isinstance(translation, str):
            raise MtProtocolError("reply missing string field 'translation'")
        return translation


def translate(backend, req: MtRequest, retries: int = 2, backoff: float = 0.5) -> str:
    """Run one translation, retrying retryable errors up to ``retries`` times
    with exponential backoff.  Non-retryable errors surface immediately."""
    attempt = 0
    while True:
        try:
            return backend.translate(req)
        except MtError as exc:
            if not exc.retryable or attempt >= retries:
                raise
            if backoff:
                time.sleep(backoff * (2 ** attempt))
            attempt += 1
