"""Agreement / verification / precision / recall over a prediction run.

Agreement is exact match with the gold SF after normalization.  Verification
pairs the PREDICTED SF with the GOLD English LF so that baselines (which
output no LF of their own) are scoreable on the same footing as the pipeline.
Precision is the portion of agreed terms that are verified; recall (and the
verification rate) is the portion of all entries that are verified.  Counts
are kept as exact rationals until rendering.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .baselines import SfPrediction
from .corpus import GoldEntry, normalize_sf
from .errors import AlignmentError
from .index import AcronymIndex

RATE_FIELDS = ("agreement_rate", "verification_rate", "precision", "recall")


def is_agreement(pred_sf: str, gold_sf: str) -> bool:
    key = normalize_sf(pred_sf)
    return bool(key) and key == normalize_sf(gold_sf)


def is_verified(index: AcronymIndex, en_lf: str, pred_sf: str, k: int = 2) -> bool:
    if not normalize_sf(pred_sf):
        return False
    return index.verify(en_lf, pred_sf, k).verified


@dataclass(frozen=True)
class EvalReport:
    n: int
    agreed: int
    verified: int
    agreed_and_verified: int
    agreement_rate: Fraction
    verification_rate: Fraction
    precision: Fraction
    recall: Fraction
    precision_defined: bool = True
    per_strategy: dict = field(default_factory=dict)


def _make_report(n: int, agreed: int, verified: int, agreed_and_verified: int,
                 per_strategy=None) -> EvalReport:
    if n:
        agreement_rate = Fraction(agreed, n)
        verification_rate = Fraction(verified, n)
        recall = Fraction(verified, n)
    else:
        agreement_rate = verification_rate = recall = Fraction(0)
    if agreed:
        precision = Fraction(agreed_and_verified, agreed)
        precision_defined = True
    else:
        precision = Fraction(0)
        precision_defined = False
    return EvalReport(
        n=n, agreed=agreed, verified=verified, agreed_and_verified=agreed_and_verified,
        agreement_rate=agreement_rate, verification_rate=verification_rate,
        precision=precision, recall=recall, precision_defined=precision_defined,
        per_strategy=per_strategy or {},
    )


def evaluate(predictions: Iterable[SfPrediction], gold: list[GoldEntry],
             index: AcronymIndex, k: int = 2) -> EvalReport:
    """Score predictions against gold; missing entries count as abstentions.

    Predictions are aligned by entry_id; an unknown or duplicated id raises
    AlignmentError.  With several strategies present, per_strategy carries one
    sub-report each and the top-level counts aggregate all prediction slots.
    """
    gold_by_id = {e.id: e for e in gold}
    by_strategy: dict[str, dict[str, SfPrediction]] = {}
    order: list[str] = []
    for pred in predictions:
        if pred.entry_id is None or pred.entry_id not in gold_by_id:
            raise AlignmentError(f"prediction references unknown entry id {pred.entry_id!r}")
        bucket = by_strategy.setdefault(pred.strategy.value, {})
        if pred.entry_id in bucket:
            raise AlignmentError(
                f"duplicate prediction for entry {pred.entry_id} ({pred.strategy.value})"
            )
        if pred.strategy.value not in order:
            order.append(pred.strategy.value)
        bucket[pred.entry_id] = pred

    per_strategy = {}
    totals = [0, 0, 0, 0]
    for name in order:
        bucket = by_strategy[name]
        agreed = verified = both = 0
        for entry in gold:
            pred = bucket.get(entry.id)
            pred_sf = "" if pred is None or pred.abstain else pred.en_sf
            a = is_agreement(pred_sf, entry.en.sf)
            v = is_verified(index, entry.en.lf, pred_sf, k)
            agreed += a
            verified += v
            both += a and v
        per_strategy[name] = _make_report(len(gold), agreed, verified, both)
        totals[0] += len(gold)
        totals[1] += agreed
        totals[2] += verified
        totals[3] += both
    return _make_report(*totals, per_strategy=per_strategy)


# --- rendering -------------------------------------------------------------

def _fmt(rate: Fraction) -> str:
    return f"{float(rate):.3f}"


def _report_dict(report: EvalReport) -> dict:
    d = {
        "n": report.n,
        "agreed": report.agreed,
        "verified": report.verified,
        "agreed_and_verified": report.agreed_and_verified,
        "agreement_rate": float(_fmt(report.agreement_rate)),
        "verification_rate": float(_fmt(report.verification_rate)),
        "precision": float(_fmt(report.precision)),
        "recall": float(_fmt(report.recall)),
        "precision_defined": report.precision_defined,
    }
    if report.per_strategy:
        d["per_strategy"] = {
            name: _report_dict(sub) for name, sub in sorted(report.per_strategy.items())
        }
    return d


_TSV_HEADER = ("strategy", "n", "agreed", "verified", "agreed_and_verified",
               "agreement_rate", "verification_rate", "precision", "recall")


def _tsv_row(name: str, r: EvalReport) -> str:
    return "\t".join(
        (name, str(r.n), str(r.agreed), str(r.verified), str(r.agreed_and_verified),
         _fmt(r.agreement_rate), _fmt(r.verification_rate), _fmt(r.precision),
         _fmt(r.recall))
    )


def render_report(report: EvalReport, fmt: str = "table") -> str:
    """Deterministic rendering; rates printed with 3 decimal places."""
    if fmt == "json":
        return json.dumps(_report_dict(report), sort_keys=True, indent=2)
    rows = [(name, sub) for name, sub in report.per_strategy.items()] or [("overall", report)]
    if len(report.per_strategy) > 1:
        rows.append(("overall", report))
    if fmt == "tsv":
        return "\n".join(["\t".join(_TSV_HEADER)] + [_tsv_row(n, r) for n, r in rows]) + "\n"
    if fmt == "table":
        header = f"{'strategy':<12} {'n':>5} {'agree':>7} {'verif':>7} {'prec':>7} {'recall':>7}"
        lines = [header, "-" * len(header)]
        for name, r in rows:
            lines.append(
                f"{name:<12} {r.n:>5} {_fmt(r.agreement_rate):>7} "
                f"{_fmt(r.verification_rate):>7} {_fmt(r.precision):>7} {_fmt(r.recall):>7}"
            )
        return "\n".join(lines)
    raise ValueError(f"unknown report format {fmt!r}")


def parse_report_tsv(text: str) -> list[dict]:
    """Parse render_report(..., "tsv") back into dict rows."""
    lines = [line for line in text.splitlines() if line]
    if not lines or lines[0].split("\t") != list(_TSV_HEADER):
        raise ValueError("not a report TSV")
    rows = []
    for line in lines[1:]:
        cells = line.split("\t")
        if len(cells) != len(_TSV_HEADER):
            raise ValueError(f"bad report row: {line!r}")
        row: dict = dict(zip(_TSV_HEADER, cells))
        for key in ("n", "agreed", "verified", "agreed_and_verified"):
            row[key] = int(row[key])
        for key in RATE_FIELDS:
            row[key] = float(row[key])
        rows.append(row)
    return rows
