"""Rule-based n-best generation of short-form candidates from an English long form.

The generator enumerates initialisms (with and without stopwords), augments
them with up to ``max_interior`` extra letters drawn in order from inside the
contributing tokens, and optionally keeps digit tokens verbatim.  Candidates
are scored (lower is better: 1.0 per interior letter, 0.5 per stopword-derived
letter), deduplicated, and totally ordered by (score, length, spelling).

An external learned generator can be plugged in through a one-line child
process protocol; see external_generate.
"""

from __future__ import annotations

import enum
import itertools
import logging
import subprocess
from dataclasses import dataclass, field
from typing import Sequence

from .corpus import normalize_lf, normalize_sf
from .errors import AdapterProtocolError, AdapterTimeout, AdapterUnavailable, EmptyLongForm

log = logging.getLogger(__name__)

STOPWORDS = frozenset(
    {"a", "an", "the", "of", "for", "and", "or", "in", "on", "to", "de", "du", "la", "le"}
)

MIN_CANDIDATE_LEN = 2
MAX_CANDIDATE_LEN = 10

INTERIOR_LETTER_COST = 1.0
STOPWORD_LETTER_COST = 0.5


class Origin(enum.Enum):
    TOKEN_INITIAL = "token_initial"
    STOPWORD_SKIPPING = "stopword_skipping"
    INTERIOR_LETTERS = "interior_letters"
    DIGIT_PRESERVING = "digit_preserving"
    EXTERNAL = "external"


@dataclass(frozen=True)
class Hypothesis:
    """A candidate short form; score is non-negative, lower ranks first."""

    sf: str
    score: float
    origin: Origin


@dataclass(frozen=True)
class _Token:
    text: str
    is_stop: bool
    initial: str            # first alphanumeric character
    interior: tuple[str, ...]  # letters after the initial, in order

    @property
    def is_digit_token(self) -> bool:
        return self.text.isdigit()


def _split_tokens(en_lf: str) -> list[_Token]:
    tokens = []
    for raw in normalize_lf(en_lf).split():
        alnum = [ch for ch in raw if ch.isalnum()]
        if not alnum:
            continue
        first_idx = next(i for i, ch in enumerate(raw) if ch.isalnum())
        interior = tuple(ch for ch in raw[first_idx + 1:] if ch.isalpha())
        tokens.append(
            _Token(text=raw, is_stop=raw in STOPWORDS, initial=alnum[0], interior=interior)
        )
    return tokens


def _assemble(tokens: Sequence[_Token], picked: dict[int, tuple[str, ...]],
              digit_verbatim: bool) -> str:
    parts = []
    for i, tok in enumerate(tokens):
        if digit_verbatim and tok.is_digit_token:
            parts.append(tok.text)
        else:
            parts.append(tok.initial)
        parts.extend(picked.get(i, ()))
    return "".join(parts)


def generate_candidates(
    en_lf: str,
    max_interior: int = 3,
    max_candidates: int = 50,
) -> list[Hypothesis]:
    """Deterministic n-best list of SF candidates for an English long form.

    Raises EmptyLongForm when the input normalizes to nothing usable.  The
    returned list is sorted by (score asc, length asc, lexicographic) and is
    a prefix of the full enumeration when truncated to ``max_candidates``.
    """
    if max_candidates < 1:
        raise ValueError("max_candidates must be >= 1")
    all_tokens = _split_tokens(en_lf)
    if not all_tokens:
        raise EmptyLongForm(f"no usable tokens in long form {en_lf!r}")

    bases: list[tuple[list[_Token], Origin, float]] = [(all_tokens, Origin.TOKEN_INITIAL, 0.0)]
    stop_cost = STOPWORD_LETTER_COST * sum(1 for t in all_tokens if t.is_stop)
    if stop_cost:
        bases[0] = (all_tokens, Origin.TOKEN_INITIAL, stop_cost)
        nonstop = [t for t in all_tokens if not t.is_stop]
        if nonstop:
            bases.append((nonstop, Origin.STOPWORD_SKIPPING, 0.0))

    best: dict[str, Hypothesis] = {}

    def consider(sf_raw: str, score: float, origin: Origin) -> None:
        sf = normalize_sf(sf_raw)
        if not MIN_CANDIDATE_LEN <= len(sf) <= MAX_CANDIDATE_LEN:
            return
        current = best.get(sf)
        if current is None or score < current.score:
            best[sf] = Hypothesis(sf=sf, score=score, origin=origin)

    for tokens, base_origin, base_cost in bases:
        # positions of interior letters across the contributing tokens
        interior_slots = [
            (tok_idx, let_idx)
            for tok_idx, tok in enumerate(tokens)
            for let_idx in range(len(tok.interior))
        ]
        has_wide_digit = any(t.is_digit_token and len(t.text) > 1 for t in tokens)
        base_len = len(tokens)
        for n_extra in range(0, max_interior + 1):
            if base_len + n_extra > MAX_CANDIDATE_LEN:
                break
            for combo in itertools.combinations(interior_slots, n_extra):
                picked: dict[int, tuple[str, ...]] = {}
                for tok_idx, group in itertools.groupby(combo, key=lambda s: s[0]):
                    picked[tok_idx] = tuple(
                        tokens[tok_idx].interior[let_idx] for _, let_idx in group
                    )
                score = base_cost + INTERIOR_LETTER_COST * n_extra
                origin = Origin.INTERIOR_LETTERS if n_extra else base_origin
                consider(_assemble(tokens, picked, digit_verbatim=False), score, origin)
                if has_wide_digit:
                    consider(
                        _assemble(tokens, picked, digit_verbatim=True),
                        score,
                        Origin.DIGIT_PRESERVING,
                    )

    ranked = sorted(best.values(), key=lambda h: (h.score, len(h.sf), h.sf))
    return ranked[:max_candidates]


# --- external generator adapter -------------------------------------------

@dataclass(frozen=True)
class ExternalGeneratorConfig:
    """Child-process line protocol: request = the LF on stdin, reply = one
    line of tab-separated SF candidates in rank order on stdout."""

    command: tuple[str, ...] = field(default_factory=tuple)
    timeout: float = 10.0


def external_generate(en_lf: str, config: ExternalGeneratorConfig) -> list[Hypothesis]:
    """Query an external generator; candidates come back with origin External
    and score equal to their reply rank.  Malformed candidates are skipped
    with a logged count."""
    if not config.command:
        raise AdapterUnavailable("no external generator command configured")
    try:
        proc = subprocess.run(
            list(config.command),
            input=en_lf + "\n",
            capture_output=True,
            text=True,
            timeout=config.timeout,
        )
    except FileNotFoundError as exc:
        raise AdapterUnavailable(f"cannot start {config.command[0]!r}: {exc}") from exc
    except subprocess.TimeoutExpired as exc:
        raise AdapterTimeout(f"no reply within {config.timeout}s") from exc
    if proc.returncode != 0:
        raise AdapterProtocolError(f"generator exited with status {proc.returncode}")
    reply = proc.stdout.split("\n", 1)[0]
    if not reply.strip():
        return []
    hypotheses = []
    skipped = 0
    for rank, cell in enumerate(reply.split("\t")):
        sf = normalize_sf(cell)
        if not MIN_CANDIDATE_LEN <= len(sf) <= MAX_CANDIDATE_LEN:
            skipped += 1
            continue
        hypotheses.append(Hypothesis(sf=sf, score=float(rank), origin=Origin.EXTERNAL))
    if skipped:
        log.warning("external generator: skipped %d malformed candidate(s)", skipped)
    return hypotheses
