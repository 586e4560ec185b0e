"""Boolean retrieval over extracted (LF, SF) pairs.

The index maps normalized long forms to the short forms attested with them
and the set of source documents for each pairing.  Verification succeeds
when a pair is attested in at least ``k`` distinct documents (default 2,
matching professional practice of requiring a couple of published sources).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .corpus import normalize_lf, normalize_sf
from .errors import FormatVersionMismatch, MalformedRow
from .extraction import ExtractionRecord, parse_record_line

INDEX_MAGIC = "ACROIDX"
INDEX_VERSION = "1"


class VerificationStatus(enum.Enum):
    VERIFIED = "verified"
    UNVERIFIED = "unverified"


@dataclass(frozen=True)
class VerificationResult:
    """Outcome of one threshold query; sources are sorted for stable display."""

    status: VerificationStatus
    sources: tuple[str, ...]
    threshold: int

    @property
    def verified(self) -> bool:
        return self.status is VerificationStatus.VERIFIED


class AcronymIndex:
    """Immutable after build; safe for unlimited concurrent readers."""

    def __init__(
        self,
        entries: Mapping[str, Mapping[str, frozenset[str]]],
        doc_count: int,
        built_from: str,
        records: tuple[ExtractionRecord, ...],
    ):
        self._entries = {lf: dict(sfs) for lf, sfs in entries.items()}
        self.doc_count = doc_count
        self.built_from = built_from
        self.records = records

    def count_sources(self, lf: str, sf: str) -> int:
        """Number of distinct documents attesting the (normalized) pair."""
        return len(self._entries.get(normalize_lf(lf), {}).get(normalize_sf(sf), ()))

    def lookup_sfs(self, lf: str) -> dict[str, frozenset[str]]:
        """All attested short forms for a long form, possibly empty."""
        return dict(self._entries.get(normalize_lf(lf), {}))

    def verify(self, lf: str, sf: str, k: int = 2) -> VerificationResult:
        """Threshold check: Verified iff the pair is attested in >= k documents."""
        if k < 1:
            raise ValueError("threshold k must be >= 1")
        docs = self._entries.get(normalize_lf(lf), {}).get(normalize_sf(sf), frozenset())
        status = VerificationStatus.VERIFIED if len(docs) >= k else VerificationStatus.UNVERIFIED
        return VerificationResult(status=status, sources=tuple(sorted(docs)), threshold=k)

    def pair_count(self) -> int:
        return sum(len(sfs) for sfs in self._entries.values())

    def lf_keys(self) -> list[str]:
        return sorted(self._entries)


def build_index(
    records: Iterable[ExtractionRecord],
    include_relaxed: bool = False,
    built_from: str = "",
) -> AcronymIndex:
    """Build the retrieval index from extraction records.

    Relaxed records are admitted only when ``include_relaxed``.  Records
    whose keys normalize to nothing are skipped (they could never match).
    Two records from the same document for the same pair count once.
    """
    admitted = tuple(r for r in records if include_relaxed or not r.relaxed)
    entries: dict[str, dict[str, set[str]]] = {}
    for rec in admitted:
        lf_key = normalize_lf(rec.lf)
        sf_key = normalize_sf(rec.sf)
        if not lf_key or not sf_key:
            continue
        entries.setdefault(lf_key, {}).setdefault(sf_key, set()).add(rec.doc_id)
    frozen = {
        lf: {sf: frozenset(docs) for sf, docs in sfs.items()}
        for lf, sfs in entries.items()
    }
    doc_count = len({r.doc_id for r in admitted})
    return AcronymIndex(
        entries=frozen,
        doc_count=doc_count,
        built_from=built_from or f"built from {len(admitted)} records",
        records=admitted,
    )


def save_index(index: AcronymIndex, path) -> None:
    """Persist as a one-line header plus the extraction TSV evidence trail."""
    provenance = index.built_from.replace("\t", " ").replace("\n", " ")
    lines = [f"{INDEX_MAGIC}\t{INDEX_VERSION}\t{index.doc_count}\t{provenance}"]
    for r in index.records:
        lines.append(f"{r.doc_id}\t{r.sf}\t{r.lf}\t{r.offset}\t{1 if r.relaxed else 0}")
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def load_index(path) -> AcronymIndex:
    """Rebuild an index saved by save_index; rejects unknown headers and truncated bodies."""
    raw = Path(path).read_text(encoding="utf-8")
    lines = raw.splitlines()
    if not lines:
        raise FormatVersionMismatch("empty index file")
    header = lines[0].split("\t", 3)
    if len(header) != 4 or header[0] != INDEX_MAGIC:
        raise FormatVersionMismatch(f"not an index file: {lines[0][:40]!r}")
    if header[1] != INDEX_VERSION:
        raise FormatVersionMismatch(f"unsupported index version {header[1]!r}")
    try:
        doc_count = int(header[2])
    except ValueError as exc:
        raise FormatVersionMismatch(f"bad doc_count {header[2]!r}") from exc
    records = []
    for line_no, line in enumerate(lines[1:], start=2):
        if not line:
            raise MalformedRow(line_no, "blank line in index body")
        records.append(parse_record_line(line, line_no))
    rebuilt = build_index(records, include_relaxed=True, built_from=header[3])
    return AcronymIndex(
        entries=rebuilt._entries,
        doc_count=doc_count,
        built_from=header[3],
        records=rebuilt.records,
    )
