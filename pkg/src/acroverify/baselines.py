"""The three baseline short-form predictors, sharing one prediction record
with the full pipeline: Identity copies the French SF, Reverse flips it, and
MtPassthrough trusts whatever SF the MT backend produces."""

from __future__ import annotations

import enum
import unicodedata
from dataclasses import dataclass
from typing import Iterable

from .corpus import GoldEntry, normalize_sf
from .errors import MtError
from .mt import MtRequest, parse_lf_sf, translate


class Strategy(enum.Enum):
    IDENTITY = "identity"
    REVERSE = "reverse"
    MT_PASSTHROUGH = "mt"
    PIPELINE = "pipeline"
    GOLD = "gold"


@dataclass(frozen=True)
class SfPrediction:
    """One predicted English SF; abstentions keep en_sf empty."""

    en_sf: str
    strategy: Strategy
    en_lf: str | None = None
    entry_id: str | None = None
    abstain: bool = False


def predict_identity(fr_sf: str) -> SfPrediction:
    return SfPrediction(en_sf=normalize_sf(fr_sf), strategy=Strategy.IDENTITY)


def _clusters(s: str) -> list[str]:
    # combining marks travel with their base character
    out: list[str] = []
    for ch in s:
        if out and unicodedata.category(ch).startswith("M"):
            out[-1] += ch
        else:
            out.append(ch)
    return out


def predict_reverse(fr_sf: str) -> SfPrediction:
    """Character reversal of the normalized SF, on combining clusters so
    accented short forms survive the flip."""
    norm = normalize_sf(fr_sf)
    return SfPrediction(en_sf="".join(reversed(_clusters(norm))), strategy=Strategy.REVERSE)


def predict_mt(fr_lf: str, fr_sf: str, backend, retries: int = 2) -> SfPrediction:
    """Translate "LF (SF)" and keep the parsed SF; SF-less or suspect output
    becomes an abstention.  Backend errors propagate to the caller."""
    req = MtRequest(text=f"{fr_lf} ({fr_sf})", src="fr", tgt="en")
    parsed = parse_lf_sf(translate(backend, req, retries=retries))
    if parsed.en_sf and not parsed.sf_suspect:
        return SfPrediction(en_sf=parsed.en_sf, strategy=Strategy.MT_PASSTHROUGH,
                            en_lf=parsed.en_lf)
    return SfPrediction(en_sf="", strategy=Strategy.MT_PASSTHROUGH,
                        en_lf=parsed.en_lf, abstain=True)


def run_strategy(strategy: Strategy, entries: Iterable[GoldEntry], backend=None,
                 retries: int = 2) -> list[SfPrediction]:
    """Apply one baseline over a gold corpus; MT failures become abstentions
    so evaluation stays total."""
    predictions = []
    for entry in entries:
        if strategy is Strategy.IDENTITY:
            pred = predict_identity(entry.fr.sf)
        elif strategy is Strategy.REVERSE:
            pred = predict_reverse(entry.fr.sf)
        elif strategy is Strategy.GOLD:
            pred = SfPrediction(en_sf=entry.en.sf, strategy=Strategy.GOLD, en_lf=entry.en.lf)
        elif strategy is Strategy.MT_PASSTHROUGH:
            if backend is None:
                raise ValueError("mt strategy needs a backend")
            try:
                pred = predict_mt(entry.fr.lf, entry.fr.sf, backend, retries=retries)
            except MtError:
                pred = SfPrediction(en_sf="", strategy=Strategy.MT_PASSTHROUGH, abstain=True)
        else:
            raise ValueError(f"run_strategy does not drive {strategy}")
        predictions.append(
            SfPrediction(en_sf=pred.en_sf, strategy=pred.strategy, en_lf=pred.en_lf,
                         entry_id=entry.id, abstain=pred.abstain)
        )
    return predictions
