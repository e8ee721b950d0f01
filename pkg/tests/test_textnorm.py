"""Preprocessing pipeline tests: stage order, toggles, invariants."""

import random

import pytest
from hypothesis import given, strategies as st

from tetunir.stemmer import make_stemmer
from tetunir.stopwords import StopwordList
from tetunir.textnorm import (
    NormConfig,
    fold_accents,
    normalize,
    split_hyphens,
    strip_apostrophes,
    tokenize,
    unify_apostrophes,
)

TEXT_ALPHABET = sorted("abdefghiklmnoprstuvz áéíóúñ'’-.,!?123")


def test_pipeline_examples():
    assert normalize("Di'ak ka lae?") == ["di'ak", "ka", "lae"]
    assert normalize("ita-nia naran", NormConfig(split_hyphens=True)) == [
        "ita",
        "nia",
        "naran",
    ]
    assert normalize("") == []


def test_apostrophe_unification_before_tokenization():
    # curly quote must not split the word
    assert normalize("ne’ebé") == ["ne'ebé"]
    assert unify_apostrophes("a‘b’cʼd`e´f") == "a'b'c'd'e'f"


def test_fold_accents():
    assert fold_accents("ne'ebé") == "ne'ebe"
    assert fold_accents("dór") == "dor"
    assert fold_accents("xyz") == "xyz"


def test_fold_accents_idempotent_on_corpus_tokens():
    rng = random.Random(7)
    for _ in range(1000):
        token = "".join(rng.choice("abcdeíóúáéñ'x-") for _ in range(rng.randint(1, 12)))
        assert fold_accents(fold_accents(token)) == fold_accents(token)


def test_strip_and_split_token_ops():
    assert strip_apostrophes("ne'e") == "nee"
    assert split_hyphens("ida-ne'ebé") == ["ida", "ne'ebé"]
    assert split_hyphens("--a--") == ["a"]
    assert split_hyphens("a--b") == ["a", "b"]


def test_tokenizer_trims_edges_and_keeps_digits():
    assert tokenize("'ne'e' ba... 12.5!") == ["ne'e", "ba", "12", "5"]
    assert tokenize("---") == []


def test_length_filter():
    long_word = "a" * 61
    assert normalize(f"ok {long_word}") == ["ok"]
    cfg = NormConfig(max_token_len=2)
    assert normalize("ab abc a", cfg) == ["ab", "a"]


def test_stopword_removal_with_variant_correction():
    cfg = NormConfig(remove_stopwords=True)
    # "nebe" is a known misspelling of the stopword ne'ebé
    assert normalize("nebe dame iha", cfg) == ["dame"]
    # stripping apostrophes must not defeat removal: the variant map
    # carries the stripped spellings back to their canonical forms
    cfg2 = NormConfig(remove_stopwords=True, strip_apostrophes=True)
    assert normalize("ne'ebé dame", cfg2) == ["dame"]


def test_stemming_stage_runs_last():
    cfg = NormConfig(stemmer="light")
    assert normalize("komunikasaun foun", cfg) == ["komunik", "foun"]
    cfg2 = NormConfig(stemmer="moderate", remove_stopwords=True)
    # "iha" removed as stopword first, then hemudór stemmed
    assert normalize("iha hemudór", cfg2) == ["hemu"]


def test_stage_order_matches_composed_single_token_ops():
    """normalize == unify/lower/tokenize + per-token ops in documented order."""
    rng = random.Random(20241)
    stopword_list = StopwordList.bundled()
    configs = [
        NormConfig(),
        NormConfig(split_hyphens=True),
        NormConfig(strip_apostrophes=True, fold_accents=True),
        NormConfig(split_hyphens=True, strip_apostrophes=True, fold_accents=True,
                   remove_stopwords=True, stemmer="light"),
        NormConfig(remove_stopwords=True, stemmer="heavy", max_token_len=8),
    ]
    for _ in range(300):
        text = "".join(rng.choice(TEXT_ALPHABET) for _ in range(rng.randint(0, 60)))
        for cfg in configs:
            tokens = tokenize(unify_apostrophes(text).lower())
            if cfg.split_hyphens:
                tokens = [p for t in tokens for p in split_hyphens(t)]
            if cfg.strip_apostrophes:
                tokens = [strip_apostrophes(t) for t in tokens]
            if cfg.fold_accents:
                tokens = [fold_accents(t) for t in tokens]
            tokens = [t for t in tokens if t and len(t) <= cfg.max_token_len]
            if cfg.remove_stopwords:
                tokens = [t for t in tokens if stopword_list.correct(t) not in stopword_list]
            if cfg.stemmer != "none":
                stem = make_stemmer(cfg.stemmer)
                tokens = [stem(t) for t in tokens]
            assert normalize(text, cfg) == tokens, (text, cfg)


@given(st.text(alphabet=TEXT_ALPHABET, max_size=80))
def test_split_hyphens_never_reduces_token_count(text):
    base = normalize(text, NormConfig())
    split = normalize(text, NormConfig(split_hyphens=True))
    assert len(split) >= len(base)


@given(st.text(alphabet=TEXT_ALPHABET, max_size=80))
def test_output_tokens_nonempty_and_bounded(text):
    cfg = NormConfig(split_hyphens=True, strip_apostrophes=True, max_token_len=10)
    for token in normalize(text, cfg):
        assert token
        assert len(token) <= 10
        assert not any(ch.isspace() for ch in token)


@given(st.text(alphabet=TEXT_ALPHABET, max_size=80))
def test_normalize_deterministic(text):
    cfg = NormConfig(split_hyphens=True, remove_stopwords=True, stemmer="light")
    assert normalize(text, cfg) == normalize(text, cfg)


def test_config_validation():
    with pytest.raises(ValueError):
        NormConfig(lowercase=False)
    with pytest.raises(ValueError):
        NormConfig(stemmer="porter")
    with pytest.raises(ValueError):
        NormConfig(max_token_len=0)


def test_config_file_round_trip(tmp_path):
    cfg = NormConfig(split_hyphens=True, stemmer="moderate", max_token_len=42)
    path = tmp_path / "norm.cfg"
    cfg.to_file(path)
    assert NormConfig.from_file(path) == cfg
    text = path.read_text()
    assert "split_hyphens=true" in text
    assert "stemmer=moderate" in text


def test_config_labels():
    assert NormConfig().label() == "baseline"
    assert NormConfig(split_hyphens=True, strip_apostrophes=True).label() == "noapos+nohyph"
    assert NormConfig(stemmer="light").label() == "stem-light"
