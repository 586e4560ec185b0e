"""acroverify: verify machine-translated acronym pairs against attested usage."""

__version__ = "0.1.0"

from .corpus import (  # noqa: F401
    DocumentRecord,
    GoldEntry,
    TermPair,
    load_documents,
    load_gold_corpus,
    normalize_lf,
    normalize_sf,
    save_gold_corpus,
)
from .extraction import ExtractionRecord, extract_corpus, extract_pairs  # noqa: F401
from .index import (  # noqa: F401
    AcronymIndex,
    VerificationResult,
    VerificationStatus,
    build_index,
    load_index,
    save_index,
)
from .candidates import Hypothesis, Origin, generate_candidates  # noqa: F401
from .mt import DictionaryBackend, EchoBackend, HttpBackend, MtRequest, parse_lf_sf  # noqa: F401
from .baselines import SfPrediction, Strategy  # noqa: F401
from .pipeline import PipelineConfig, PipelineOutput, PipelinePath, run_batch, translate_term  # noqa: F401
from .evaluation import EvalReport, evaluate, render_report  # noqa: F401
