"""Four-step term translation: translate the pair, parse it, verify the MT's
own short form first, and only then generate and verify candidates.

When the MT output's SF is already attested in enough sources the pipeline
returns it untouched (path MtVerified).  Otherwise candidates are generated
and checked against the index in rank order (CandidateVerified), and when
nothing reaches the threshold the MT SF (or the top-ranked candidate) is
returned unverified (Fallback) so batch evaluation stays total.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .baselines import SfPrediction, Strategy
from .candidates import (
    ExternalGeneratorConfig,
    Hypothesis,
    external_generate,
    generate_candidates,
)
from .corpus import GoldEntry, TermPair, normalize_lf, normalize_sf
from .errors import AcroverifyError, EmptyLongForm, MalformedRow, MtError
from .index import AcronymIndex, VerificationResult, VerificationStatus
from .mt import MtRequest, parse_lf_sf, translate

log = logging.getLogger(__name__)


class PipelinePath(enum.Enum):
    MT_VERIFIED = "mt_verified"
    CANDIDATE_VERIFIED = "candidate_verified"
    FALLBACK = "fallback"


@dataclass
class PipelineConfig:
    backend: object
    k: int = 2
    max_candidates: int = 50
    max_interior: int = 3
    use_external_generator: bool = False
    external: ExternalGeneratorConfig | None = None
    retries: int = 2
    src: str = "fr"
    tgt: str = "en"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.max_candidates < 1:
            raise ValueError("max_candidates must be >= 1")


@dataclass(frozen=True)
class PipelineOutput:
    en_lf: str
    chosen_sf: str | None
    verification: VerificationResult
    n_best: tuple[tuple[Hypothesis, VerificationResult], ...]
    path: PipelinePath
    mt_sf: str | None
    raw_translation: str


def choose_sf(n_best) -> Hypothesis | None:
    """First hypothesis whose verification succeeded, in rank order."""
    for hyp, result in n_best:
        if result.verified:
            return hyp
    return None


def _generate(en_lf: str, config: PipelineConfig) -> list[Hypothesis]:
    if config.use_external_generator:
        try:
            hyps = external_generate(en_lf, config.external or ExternalGeneratorConfig())
            if hyps:
                return hyps[: config.max_candidates]
        except AcroverifyError as exc:
            log.warning("external generator failed (%s); using rule generator", exc)
    return generate_candidates(
        en_lf, max_interior=config.max_interior, max_candidates=config.max_candidates
    )


def translate_term(fr: TermPair, index: AcronymIndex, config: PipelineConfig) -> PipelineOutput:
    """Run the full workflow for one French term pair."""
    req = MtRequest(text=f"{fr.lf} ({fr.sf})", src=config.src, tgt=config.tgt)
    raw = translate(config.backend, req, retries=config.retries)
    parsed = parse_lf_sf(raw)
    en_lf = parsed.en_lf
    if not normalize_lf(en_lf):
        raise EmptyLongForm(f"translation {raw!r} yields no usable long form")
    mt_sf = parsed.en_sf if parsed.en_sf and not parsed.sf_suspect else None

    if mt_sf is not None:
        result = index.verify(en_lf, mt_sf, config.k)
        if result.verified:
            return PipelineOutput(
                en_lf=en_lf, chosen_sf=mt_sf, verification=result, n_best=(),
                path=PipelinePath.MT_VERIFIED, mt_sf=mt_sf, raw_translation=raw,
            )

    hypotheses = _generate(en_lf, config)
    attested = index.lookup_sfs(en_lf)
    n_best = []
    for hyp in hypotheses:
        docs = attested.get(normalize_sf(hyp.sf), frozenset())
        status = (
            VerificationStatus.VERIFIED
            if len(docs) >= config.k
            else VerificationStatus.UNVERIFIED
        )
        n_best.append(
            (hyp, VerificationResult(status=status, sources=tuple(sorted(docs)),
                                     threshold=config.k))
        )
    n_best = tuple(n_best)

    winner = choose_sf(n_best)
    if winner is not None:
        result = next(res for hyp, res in n_best if hyp is winner)
        return PipelineOutput(
            en_lf=en_lf, chosen_sf=winner.sf, verification=result, n_best=n_best,
            path=PipelinePath.CANDIDATE_VERIFIED, mt_sf=mt_sf, raw_translation=raw,
        )

    chosen = mt_sf if mt_sf is not None else (n_best[0][0].sf if n_best else None)
    if chosen is not None:
        result = index.verify(en_lf, chosen, config.k)
    else:
        result = VerificationResult(
            status=VerificationStatus.UNVERIFIED, sources=(), threshold=config.k
        )
    return PipelineOutput(
        en_lf=en_lf, chosen_sf=chosen, verification=result, n_best=n_best,
        path=PipelinePath.FALLBACK, mt_sf=mt_sf, raw_translation=raw,
    )


@dataclass(frozen=True)
class BatchResult:
    """Per-entry outcome of a batch run; failed entries carry an abstaining
    prediction and the error text instead of an output."""

    entry_id: str
    prediction: SfPrediction
    output: PipelineOutput | None = None
    error: str | None = None


def run_batch(entries: Iterable[GoldEntry], index: AcronymIndex,
              config: PipelineConfig) -> list[BatchResult]:
    """translate_term over a gold corpus; per-entry failures become Abstain
    rows and never abort the batch.  Output order matches input order."""
    results = []
    for entry in entries:
        try:
            output = translate_term(entry.fr, index, config)
        except (MtError, EmptyLongForm) as exc:
            results.append(
                BatchResult(
                    entry_id=entry.id,
                    prediction=SfPrediction(en_sf="", strategy=Strategy.PIPELINE,
                                            entry_id=entry.id, abstain=True),
                    error=str(exc),
                )
            )
            continue
        results.append(
            BatchResult(
                entry_id=entry.id,
                prediction=SfPrediction(
                    en_sf=output.chosen_sf or "",
                    strategy=Strategy.PIPELINE,
                    en_lf=output.en_lf,
                    entry_id=entry.id,
                    abstain=output.chosen_sf is None,
                ),
                output=output,
            )
        )
    return results


# --- prediction TSV (consumed by the evaluation module) --------------------

@dataclass(frozen=True)
class PredictionRow:
    """One line of the prediction TSV:
    entry_id, strategy, en_lf, en_sf, path, verified(0|1), sources(comma-sep)."""

    entry_id: str
    strategy: str
    en_lf: str
    en_sf: str
    path: str
    verified: bool
    sources: tuple[str, ...] = field(default_factory=tuple)

    def to_prediction(self) -> SfPrediction:
        return SfPrediction(
            en_sf=self.en_sf,
            strategy=Strategy(self.strategy),
            en_lf=self.en_lf or None,
            entry_id=self.entry_id,
            abstain=not self.en_sf,
        )


def _row_from_prediction(pred: SfPrediction, output: PipelineOutput | None = None) -> PredictionRow:
    path = output.path.value if output is not None else ""
    verified = bool(output is not None and output.verification.verified)
    sources = output.verification.sources if output is not None else ()
    return PredictionRow(
        entry_id=pred.entry_id or "",
        strategy=pred.strategy.value,
        en_lf=pred.en_lf or "",
        en_sf="" if pred.abstain else pred.en_sf,
        path=path,
        verified=verified,
        sources=tuple(sources),
    )


def write_predictions_tsv(path, items: Iterable) -> None:
    """Write predictions (SfPrediction or BatchResult) to the shared TSV."""
    lines = []
    for item in items:
        if isinstance(item, BatchResult):
            row = _row_from_prediction(item.prediction, item.output)
        elif isinstance(item, SfPrediction):
            row = _row_from_prediction(item)
        elif isinstance(item, PredictionRow):
            row = item
        else:
            raise TypeError(f"cannot serialize {type(item).__name__}")
        lines.append(
            "\t".join(
                (row.entry_id, row.strategy, row.en_lf, row.en_sf, row.path,
                 "1" if row.verified else "0", ",".join(row.sources))
            )
        )
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def read_predictions_tsv(path) -> list[PredictionRow]:
    rows = []
    raw = Path(path).read_text(encoding="utf-8")
    for line_no, line in enumerate(raw.splitlines(), start=1):
        if not line:
            continue
        cells = line.split("\t")
        if len(cells) != 7:
            raise MalformedRow(line_no, f"expected 7 columns, got {len(cells)}")
        entry_id, strategy, en_lf, en_sf, path_, verified_s, sources_s = cells
        if verified_s not in ("0", "1"):
            raise MalformedRow(line_no, f"bad verified flag {verified_s!r}")
        rows.append(
            PredictionRow(
                entry_id=entry_id, strategy=strategy, en_lf=en_lf, en_sf=en_sf,
                path=path_, verified=verified_s == "1",
                sources=tuple(s for s in sources_s.split(",") if s),
            )
        )
    return rows
