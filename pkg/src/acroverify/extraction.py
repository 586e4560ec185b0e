"""Mine (doc_id, SF, LF) pairs from raw text.

Detects parenthesized short forms and recovers their long form by scanning
the SF's characters right-to-left through the preceding token window, the
classic alignment used by parenthetical abbreviation extractors.  Only
innermost parenthesized spans are considered, which keeps the scan linear.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import DocumentRecord, normalize_lf, normalize_sf
from .errors import MalformedRow

MIN_SF_LEN = 2
MAX_SF_LEN = 10

_INNER_PAREN = re.compile(r"\(([^()]*)\)")
_BOUNDARY_TRAIL = ".,;:!?"
_EDGE_PUNCT = ".,;:!?\"'"

RELAXED_MAX_TOKENS = 6
RELAXED_MIN_TOKENS = 2


@dataclass(frozen=True)
class ExtractionRecord:
    """One mined pair; offset is the character index of the opening parenthesis."""

    doc_id: str
    sf: str
    lf: str
    offset: int
    relaxed: bool = False

    def __post_init__(self):
        if not self.sf.strip():
            raise ValueError("short form must be non-empty")
        if not self.lf.split():
            raise ValueError("long form must have at least one token")


def valid_short_form(candidate: str) -> bool:
    """Standard SF candidate filter.

    True iff the trimmed candidate is 2-10 characters, at most 2 tokens,
    starts with an alphanumeric character, and contains at least one letter.
    """
    s = candidate.strip()
    if not MIN_SF_LEN <= len(s) <= MAX_SF_LEN:
        return False
    if len(s.split()) > 2:
        return False
    if not s[0].isalnum():
        return False
    return any(ch.isalpha() for ch in s)


def window_size(sf: str) -> int:
    """Token budget for the long form of a given short form."""
    return min(len(sf) + 5, 2 * len(sf))


def best_long_form(preceding_tokens: Sequence[str], sf: str) -> str | None:
    """Align ``sf`` right-to-left against the token window before its parenthesis.

    Letters match case-insensitively, digits must match exactly, and other SF
    characters are skipped.  The SF's first alphanumeric character must match
    at the start of a token; the returned long form is the shortest token
    suffix of the window that admits such an alignment, or None.
    """
    sf = sf.strip()
    alnum_positions = [i for i, ch in enumerate(sf) if ch.isalnum()]
    if not alnum_positions:
        return None
    first_alnum = alnum_positions[0]

    window = list(preceding_tokens)[-window_size(sf):]
    if not window:
        return None
    text = " ".join(window)
    token_starts = set()
    pos = 0
    for tok in window:
        token_starts.add(pos)
        pos += len(tok) + 1

    li = len(text) - 1
    si = len(sf) - 1
    while si >= 0:
        ch = sf[si]
        if not ch.isalnum():
            si -= 1
            continue
        must_start_token = si == first_alnum
        while li >= 0:
            if ch.isdigit():
                hit = text[li] == ch
            else:
                hit = text[li].isalpha() and text[li].lower() == ch.lower()
            if hit and (not must_start_token or li in token_starts):
                break
            li -= 1
        if li < 0:
            return None
        si -= 1
        li -= 1
    return text[li + 1:]


def _relaxed_window(tokens: Sequence[str]) -> list[str] | None:
    """Up to 6 clean tokens before the parenthesis, stopping at clause boundaries."""
    out: list[str] = []
    for tok in reversed(tokens):
        if len(out) >= RELAXED_MAX_TOKENS:
            break
        if not tok or tok[-1] in _BOUNDARY_TRAIL or "(" in tok or ")" in tok:
            break
        out.append(tok)
    out.reverse()
    return out if len(out) >= RELAXED_MIN_TOKENS else None


def extract_pairs(doc: DocumentRecord, relaxed: bool = False) -> list[ExtractionRecord]:
    """Scan one document for (LF, SF) pairs, in document order.

    The usual pattern is "long form (SF)".  When the parenthesized text is
    itself multi-token and the single token before the parenthesis looks like
    an SF, the reversed pattern "SF (long form)" is tried.  With ``relaxed``,
    spans whose SF fails alignment still yield a record from the short token
    window before the parenthesis, marked relaxed=True.  Duplicates within a
    document are dropped on the normalized (sf, lf) key.
    """
    records: list[ExtractionRecord] = []
    seen: set[tuple[str, str]] = set()
    for match in _INNER_PAREN.finditer(doc.text):
        inner = match.group(1).strip()
        offset = match.start()
        before_tokens = doc.text[:offset].split()
        record = None
        if valid_short_form(inner):
            lf = best_long_form(before_tokens, inner)
            if lf is not None:
                record = ExtractionRecord(doc.doc_id, inner, lf, offset)
            elif relaxed:
                window = _relaxed_window(before_tokens)
                if window:
                    record = ExtractionRecord(
                        doc.doc_id, inner, " ".join(window), offset, relaxed=True
                    )
        elif len(inner.split()) > 1 and before_tokens:
            sf = before_tokens[-1].strip(_EDGE_PUNCT)
            if valid_short_form(sf):
                lf = best_long_form(inner.split(), sf)
                if lf is not None:
                    record = ExtractionRecord(doc.doc_id, sf, lf, offset)
        if record is None:
            continue
        key = (normalize_sf(record.sf), normalize_lf(record.lf))
        if key in seen:
            continue
        seen.add(key)
        records.append(record)
    return records


def extract_corpus(docs: Iterable[DocumentRecord], relaxed: bool = False) -> list[ExtractionRecord]:
    """extract_pairs over a document collection, order-preserving."""
    records: list[ExtractionRecord] = []
    for doc in docs:
        records.extend(extract_pairs(doc, relaxed=relaxed))
    return records


def write_records_tsv(records: Iterable[ExtractionRecord], path) -> None:
    """Write records as ``doc_id \\t SF \\t LF \\t offset \\t relaxed(0|1)``."""
    lines = [
        f"{r.doc_id}\t{r.sf}\t{r.lf}\t{r.offset}\t{1 if r.relaxed else 0}"
        for r in records
    ]
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def parse_record_line(line: str, line_no: int) -> ExtractionRecord:
    cells = line.split("\t")
    if len(cells) != 5:
        raise MalformedRow(line_no, f"expected 5 columns, got {len(cells)}")
    doc_id, sf, lf, offset_s, relaxed_s = cells
    try:
        offset = int(offset_s)
    except ValueError as exc:
        raise MalformedRow(line_no, f"bad offset {offset_s!r}") from exc
    if relaxed_s not in ("0", "1"):
        raise MalformedRow(line_no, f"bad relaxed flag {relaxed_s!r}")
    return ExtractionRecord(doc_id, sf, lf, offset, relaxed=relaxed_s == "1")


def read_records_tsv(path) -> list[ExtractionRecord]:
    raw = Path(path).read_text(encoding="utf-8")
    records = []
    for line_no, line in enumerate(raw.splitlines(), start=1):
        if not line:
            continue
        records.append(parse_record_line(line, line_no))
    return records
