import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from acroverify.corpus import (
    GoldEntry,
    TermPair,
    load_documents,
    load_gold_corpus,
    normalize_lf,
    normalize_sf,
    save_gold_corpus,
)
from acroverify.errors import DuplicateDocId, EmptyField, MalformedRow


def test_normalize_lf_rules():
    assert normalize_lf("Cardio-Pulmonary  Resuscitation") == "cardio pulmonary resuscitation"
    assert normalize_lf("réanimation cardiopulmonaire") == "réanimation cardiopulmonaire"
    assert normalize_lf("") == ""
    assert normalize_lf("  .heart_rate! ") == "heart rate"


def test_normalize_sf_rules():
    assert normalize_sf("D.N.A.") == "DNA"
    assert normalize_sf("dna") == "DNA"
    assert normalize_sf("ICU ") == "ICU"


@given(st.text(max_size=60))
def test_normalize_lf_idempotent(text):
    once = normalize_lf(text)
    assert normalize_lf(once) == once


@given(st.text(max_size=60))
def test_normalize_sf_idempotent(text):
    once = normalize_sf(text)
    assert normalize_sf(once) == once


def test_term_pair_invariants():
    with pytest.raises(ValueError):
        TermPair("", "CPR", "en")
    with pytest.raises(ValueError):
        TermPair("heart rate", "  ", "en")
    with pytest.raises(ValueError):
        TermPair("heart rate", "42%", "en")  # no letter


def test_gold_entry_lang_tags():
    fr = TermPair("fréquence cardiaque", "FC", "fr")
    en = TermPair("heart rate", "HR", "en")
    with pytest.raises(ValueError):
        GoldEntry("1", fr=en, en=fr)


def test_load_gold_corpus(gold):
    assert len(gold) == 10
    assert [e.id for e in gold] == [str(i) for i in range(1, 11)]
    first = gold[0]
    assert first.fr.lf == "réanimation cardiopulmonaire"
    assert first.fr.sf == "RCP"
    assert first.en.lf == "cardiopulmonary resuscitation"
    assert first.en.sf == "CPR"
    adn = gold[1]
    assert (adn.fr.lf, adn.fr.sf) == ("acide désoxyribonucléique", "ADN")
    assert (adn.en.lf, adn.en.sf) == ("deoxyribonucleic acid", "DNA")


def test_load_gold_corpus_verbatim(tmp_path):
    # no normalization at load: gold text preserved exactly
    p = tmp_path / "g.tsv"
    p.write_text("Fréquence  Cardiaque\tf.c.\theart rate\tHR\n", encoding="utf-8")
    entries = load_gold_corpus(p)
    assert entries[0].fr.lf == "Fréquence  Cardiaque"
    assert entries[0].fr.sf == "f.c."


def test_load_gold_corpus_malformed(tmp_path):
    p = tmp_path / "g.tsv"
    p.write_text("a\tB\tc\n", encoding="utf-8")
    with pytest.raises(MalformedRow) as exc:
        load_gold_corpus(p)
    assert exc.value.line_no == 1


def test_load_gold_corpus_empty_field(tmp_path):
    p = tmp_path / "g.tsv"
    p.write_text("fr_lf\tfr_sf\ten_lf\ten_sf\na\tB\t \tD\n", encoding="utf-8")
    with pytest.raises(EmptyField) as exc:
        load_gold_corpus(p)
    assert exc.value.line_no == 2
    assert exc.value.col == "en_lf"


def test_load_gold_corpus_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_gold_corpus(tmp_path / "absent.tsv")


def test_load_gold_corpus_column_remap(tmp_path):
    p = tmp_path / "g.tsv"
    p.write_text("heart rate\tHR\tfréquence cardiaque\tFC\n", encoding="utf-8")
    entries = load_gold_corpus(p, columns=("en_lf", "en_sf", "fr_lf", "fr_sf"))
    assert entries[0].fr.sf == "FC"
    assert entries[0].en.sf == "HR"
    with pytest.raises(ValueError):
        load_gold_corpus(p, columns=("en_lf", "en_lf", "fr_lf", "fr_sf"))


_cell = st.text(
    alphabet=st.characters(blacklist_characters="\t\n\r", blacklist_categories=("Cs",)),
    min_size=1,
    max_size=12,
).filter(lambda s: s.strip())
_sf_cell = _cell.filter(lambda s: any(ch.isalpha() for ch in s))


@given(
    st.lists(st.tuples(_cell, _sf_cell, _cell, _sf_cell), min_size=1, max_size=8)
)
def test_gold_round_trip(tmp_path_factory, rows):
    entries = [
        GoldEntry(str(i), TermPair(fl, fs, "fr"), TermPair(el, es, "en"))
        for i, (fl, fs, el, es) in enumerate(rows, start=1)
    ]
    path = tmp_path_factory.mktemp("roundtrip") / "gold.tsv"
    save_gold_corpus(entries, path)
    assert load_gold_corpus(path) == entries


def test_load_documents_dir(docs):
    assert len(docs) == 20
    assert [d.doc_id for d in docs] == sorted(d.doc_id for d in docs)
    assert docs[0].doc_id == "d01"
    assert "cardiopulmonary resuscitation (CPR)" in docs[0].text


def test_load_documents_jsonl(tmp_path):
    p = tmp_path / "docs.jsonl"
    p.write_text(
        json.dumps({"doc_id": "hal-1", "text": "alpha"}) + "\n"
        + json.dumps({"doc_id": "hal-0", "text": "beta"}) + "\n",
        encoding="utf-8",
    )
    records = load_documents(p)
    assert [r.doc_id for r in records] == ["hal-0", "hal-1"]


def test_load_documents_duplicate(tmp_path):
    p = tmp_path / "docs.jsonl"
    p.write_text(
        '{"doc_id": "a", "text": "x"}\n{"doc_id": "a", "text": "y"}\n', encoding="utf-8"
    )
    with pytest.raises(DuplicateDocId):
        load_documents(p)


def test_load_documents_bad_jsonl(tmp_path):
    p = tmp_path / "docs.jsonl"
    p.write_text('{"doc_id": "a"}\n', encoding="utf-8")
    with pytest.raises(MalformedRow):
        load_documents(p)


def test_paper_corpus_if_available():
    import os

    path = os.environ.get("ACRONYM_CORPUS_PATH")
    if not path:
        import pytest

        pytest.skip("set ACRONYM_CORPUS_PATH to check the published 437-entry corpus")
    assert len(load_gold_corpus(path)) == 437
