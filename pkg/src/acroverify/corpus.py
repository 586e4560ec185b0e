"""Canonical data model, text normalization, and corpus/document readers.

The gold corpus is a 4-column UTF-8 TSV (fr_lf, fr_sf, en_lf, en_sf, LF line
endings, no quoting; tabs are forbidden inside cells).  Document collections
are either a directory of ``*.txt`` files (doc_id = file stem) or a JSON-lines
file with string fields ``doc_id`` and ``text``.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass
from pathlib import Path

from .errors import DuplicateDocId, EmptyField, MalformedRow

GOLD_COLUMNS = ("fr_lf", "fr_sf", "en_lf", "en_sf")

_WS_RUN = re.compile(r"\s+")
# ASCII hyphen/underscore plus the common Unicode dashes all become spaces.
_DASH_TRANSLATION = dict.fromkeys(
    map(ord, "-_‐‑‒–—―"), " "
)


def _is_edge_junk(ch: str) -> bool:
    return ch.isspace() or unicodedata.category(ch).startswith("P")


def normalize_lf(text: str) -> str:
    """Reduce a long form to its index key.

    NFC-composed, lowercased, hyphens/underscores become spaces, whitespace
    runs collapse to a single space, and leading/trailing punctuation or
    whitespace is stripped.  Idempotent; may return "" (callers treat empty
    keys as non-matching).
    """
    s = unicodedata.normalize("NFC", text).lower()
    # lowercasing can denormalize (e.g. dotted capital I); recompose.
    s = unicodedata.normalize("NFC", s)
    s = s.translate(_DASH_TRANSLATION)
    s = _WS_RUN.sub(" ", s)
    start, end = 0, len(s)
    while start < end and _is_edge_junk(s[start]):
        start += 1
    while end > start and _is_edge_junk(s[end - 1]):
        end -= 1
    return s[start:end]


def normalize_sf(text: str) -> str:
    """Reduce a short form to its index key: drop periods and whitespace, uppercase."""
    stripped = "".join(ch for ch in text if ch != "." and not ch.isspace())
    return stripped.upper()


@dataclass(frozen=True)
class TermPair:
    """A long form and its short form in one language (lang is "fr" or "en")."""

    lf: str
    sf: str
    lang: str

    def __post_init__(self):
        if not self.lf.strip():
            raise ValueError("long form must be non-empty")
        if not self.sf.strip():
            raise ValueError("short form must be non-empty")
        if not any(ch.isalpha() for ch in self.sf):
            raise ValueError("short form must contain at least one letter")


@dataclass(frozen=True)
class GoldEntry:
    """One test-set pairing: the same term in French and English."""

    id: str
    fr: TermPair
    en: TermPair

    def __post_init__(self):
        if not self.id:
            raise ValueError("entry id must be non-empty")
        if self.fr.lang != "fr" or self.en.lang != "en":
            raise ValueError("gold entry sides must be tagged fr / en")


@dataclass(frozen=True)
class DocumentRecord:
    """A target-language document the index can cite as a source."""

    doc_id: str
    text: str

    def __post_init__(self):
        if not self.doc_id:
            raise ValueError("doc_id must be non-empty")


def load_gold_corpus(path, columns=GOLD_COLUMNS) -> list[GoldEntry]:
    """Read gold entries from a TSV file.

    ``columns`` remaps the on-disk column order (must be a permutation of
    fr_lf, fr_sf, en_lf, en_sf).  An optional first header row is detected by
    the exact cell text "fr_lf".  Entry ids are the 1-based data-row ordinal.
    Gold text is preserved verbatim; no normalization happens at load.
    """
    columns = tuple(columns)
    if sorted(columns) != sorted(GOLD_COLUMNS):
        raise ValueError(f"columns must be a permutation of {GOLD_COLUMNS}")
    raw = Path(path).read_text(encoding="utf-8")
    lines = raw.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    entries: list[GoldEntry] = []
    ordinal = 0
    for line_no, line in enumerate(lines, start=1):
        cells = line.split("\t")
        if line_no == 1 and "fr_lf" in cells:
            continue
        if len(cells) != 4:
            raise MalformedRow(line_no, f"expected 4 columns, got {len(cells)}")
        named = dict(zip(columns, cells))
        for col in GOLD_COLUMNS:
            if not named[col].strip():
                raise EmptyField(line_no, col)
        ordinal += 1
        entries.append(
            GoldEntry(
                id=str(ordinal),
                fr=TermPair(named["fr_lf"], named["fr_sf"], "fr"),
                en=TermPair(named["en_lf"], named["en_sf"], "en"),
            )
        )
    return entries


def save_gold_corpus(entries, path) -> None:
    """Write gold entries as canonical TSV (inverse of load_gold_corpus)."""
    rows = ["\t".join(GOLD_COLUMNS)]
    for entry in entries:
        cells = (entry.fr.lf, entry.fr.sf, entry.en.lf, entry.en.sf)
        for cell in cells:
            if "\t" in cell or "\n" in cell:
                raise ValueError(f"tabs/newlines not allowed in cells: {cell!r}")
        rows.append("\t".join(cells))
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")


def _load_documents_dir(root: Path) -> list[DocumentRecord]:
    records = []
    for file in sorted(root.glob("*.txt")):
        records.append(DocumentRecord(doc_id=file.stem, text=file.read_text(encoding="utf-8")))
    return records


def _load_documents_jsonl(path: Path) -> list[DocumentRecord]:
    records = []
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRow(line_no, f"invalid JSON: {exc}") from exc
            if not isinstance(obj, dict) or not isinstance(obj.get("doc_id"), str) \
                    or not isinstance(obj.get("text"), str):
                raise MalformedRow(line_no, "expected object with string doc_id and text")
            records.append(DocumentRecord(doc_id=obj["doc_id"], text=obj["text"]))
    return records


def load_documents(path) -> list[DocumentRecord]:
    """Load a document collection from a directory of *.txt or a JSONL file.

    Returns records in deterministic order (lexicographic by doc_id) and
    rejects duplicate ids.
    """
    p = Path(path)
    if p.is_dir():
        records = _load_documents_dir(p)
    else:
        records = _load_documents_jsonl(p)
    seen: set[str] = set()
    for rec in records:
        if rec.doc_id in seen:
            raise DuplicateDocId(rec.doc_id)
        seen.add(rec.doc_id)
    return sorted(records, key=lambda r: r.doc_id)
