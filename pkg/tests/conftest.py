from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from acroverify import build_index, extract_corpus, load_documents, load_gold_corpus
from acroverify.mt import DictionaryBackend

# deterministic property runs: fixed derivation, no timing flake
settings.register_profile(
    "ci",
    max_examples=100,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def gold_path():
    return FIXTURES / "mini_gold.tsv"


@pytest.fixture(scope="session")
def docs_path():
    return FIXTURES / "docs"


@pytest.fixture(scope="session")
def gold(gold_path):
    return load_gold_corpus(gold_path)


@pytest.fixture(scope="session")
def docs(docs_path):
    return load_documents(docs_path)


@pytest.fixture(scope="session")
def records(docs):
    return extract_corpus(docs)


@pytest.fixture(scope="session")
def mini_index(records):
    return build_index(records, built_from="mini fixture corpus")


@pytest.fixture(scope="session")
def dictionary_backend(gold):
    return DictionaryBackend.from_gold(gold)


@pytest.fixture(scope="session")
def overlay_backend(gold):
    return DictionaryBackend.from_gold(gold, overlays=[FIXTURES / "overlay_errors.tsv"])


@pytest.fixture(scope="session")
def oracle_records():
    rows = []
    for line in (FIXTURES / "extraction_oracle.tsv").read_text(encoding="utf-8").splitlines():
        doc_id, sf, lf, offset, relaxed = line.split("\t")
        rows.append((doc_id, sf, lf, int(offset), relaxed == "1"))
    return rows
