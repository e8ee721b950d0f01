"""Metric fixtures, hand-oracle comparison, and metric properties."""

import math
import random

import pytest

from tetunir.corpus import Qrel, RunEntry
from tetunir.ireval import (
    average_precision,
    evaluate_run,
    ndcg_at_k,
    precision_at_k,
    render_csv,
    render_text,
)


def test_precision_fixtures():
    qrels = {f"d{i}": 1 for i in range(5)}
    assert precision_at_k([f"d{i}" for i in range(5)], qrels, 5) == 1.0

    qrels10 = {f"d{i}": (1 if i < 7 else 0) for i in range(10)}
    assert precision_at_k([f"d{i}" for i in range(10)], qrels10, 10) == pytest.approx(0.7)

    # ranking shorter than k pads with irrelevant
    assert precision_at_k(["d0"], {"d0": 2}, 5) == pytest.approx(0.2)


def test_average_precision_fixtures():
    # single relevant doc at rank 1
    assert average_precision(["a"], {"a": 3}) == 1.0
    # relevant at ranks 1 and 3, R = 2
    qrels = {"a": 1, "c": 2}
    assert average_precision(["a", "b", "c"], qrels) == pytest.approx((1 + 2 / 3) / 2)
    assert average_precision(["a", "b", "c"], qrels) == pytest.approx(0.8333, abs=5e-5)
    # relevant at rank 2 only, R = 4, cutoff 10
    qrels4 = {"x": 1, "y": 1, "z": 1, "w": 1}
    ranked = ["q", "x"] + [f"n{i}" for i in range(8)]
    assert average_precision(ranked, qrels4, 10) == pytest.approx(0.125)


def test_average_precision_requires_relevant():
    with pytest.raises(ValueError):
        average_precision(["a"], {"a": 0})


def test_ndcg_fixtures():
    # ideal ordering scores 1.0
    qrels = {"a": 3, "b": 2, "c": 1, "d": 0}
    assert ndcg_at_k(["a", "b", "c", "d"], qrels) == pytest.approx(1.0)
    # grades [0, 3] at k=2 against ideal [3, 0]
    two = {"good": 3, "bad": 0}
    expected = (3 / math.log2(3)) / 3
    assert ndcg_at_k(["bad", "good"], two, 2) == pytest.approx(expected)
    assert ndcg_at_k(["bad", "good"], two, 2) == pytest.approx(0.6309, abs=5e-5)
    # all retrieved grade 0 while relevant docs exist
    assert ndcg_at_k(["bad"], {"good": 2, "bad": 0}, 1) == 0.0


def test_ndcg_exponential_gain_option():
    qrels = {"a": 3, "b": 1}
    lin = ndcg_at_k(["b", "a"], qrels, 2, gain="linear")
    exp = ndcg_at_k(["b", "a"], qrels, 2, gain="exp")
    assert lin != exp
    assert ndcg_at_k(["a", "b"], qrels, 2, gain="exp") == pytest.approx(1.0)
    with pytest.raises(ValueError):
        ndcg_at_k(["a"], qrels, 1, gain="sqrt")


def test_ndcg_never_exceeds_one():
    rng = random.Random(5)
    for _ in range(300):
        docs = [f"d{i}" for i in range(10)]
        qrels = {d: rng.randint(0, 3) for d in docs}
        rng.shuffle(docs)
        for k in (1, 3, 5, 10):
            assert ndcg_at_k(docs, qrels, k) <= 1.0 + 1e-12


def test_evaluate_run_ideal_ranking_is_all_ones():
    # MAP@k divides by the full relevant count R, so every metric can only
    # reach 1.0 when the cutoff equals R and the ideal run retrieves all
    # R relevant docs in grade order
    qrels = [
        Qrel(1, "a", 3), Qrel(1, "b", 2), Qrel(1, "c", 1),
        Qrel(2, "x", 2), Qrel(2, "y", 1), Qrel(2, "z", 1),
    ]
    run = {1: ["a", "b", "c"], 2: ["x", "y", "z"]}
    report = evaluate_run(run, qrels, cutoffs=(3,))
    for name, value in report.means.items():
        assert value == pytest.approx(1.0), name


def test_evaluate_run_empty_run_flags_everything():
    qrels = [Qrel(1, "a", 1)]
    report = evaluate_run({}, qrels)
    assert report.per_topic == {}
    assert set(report.means.values()) == {0.0}


def test_evaluate_run_crafted_fixture_matches_hand_sheet():
    # topic 1: relevant docs a(3), b(1); retrieved [a, x, b]
    # topic 2: relevant doc p(2); retrieved [q, p]
    # topic 3: no relevant docs -> skipped
    qrels = [
        Qrel(1, "a", 3), Qrel(1, "b", 1), Qrel(1, "x", 0),
        Qrel(2, "p", 2), Qrel(2, "q", 0),
        Qrel(3, "z", 0),
    ]
    run = {1: ["a", "x", "b"], 2: ["q", "p"], 3: ["z"]}
    report = evaluate_run(run, qrels, cutoffs=(2,))

    t1 = report.per_topic[1]
    assert t1["P@2"] == pytest.approx(1 / 2)
    assert t1["MAP@2"] == pytest.approx((1 / 1) / 2)
    assert t1["MAP"] == pytest.approx((1 + 2 / 3) / 2)
    idcg = 3 / math.log2(2) + 1 / math.log2(3)
    dcg_at2 = 3 / math.log2(2)
    assert t1["NDCG@2"] == pytest.approx(dcg_at2 / (3 + 1 / math.log2(3)))
    dcg_full = 3 + 1 / math.log2(4)
    assert t1["NDCG"] == pytest.approx(dcg_full / idcg)

    t2 = report.per_topic[2]
    assert t2["P@2"] == pytest.approx(1 / 2)
    assert t2["MAP"] == pytest.approx(1 / 2)
    assert t2["NDCG"] == pytest.approx((2 / math.log2(3)) / 2)

    assert report.skipped_topics == [3]
    assert report.means["P@2"] == pytest.approx((0.5 + 0.5) / 2)


def test_run_entries_accepted_as_input():
    entries = [
        RunEntry(1, "a", 1, 3.0, "t"),
        RunEntry(1, "b", 2, 2.0, "t"),
    ]
    report = evaluate_run(entries, [Qrel(1, "b", 2)], cutoffs=(1, 2))
    assert report.per_topic[1]["P@2"] == pytest.approx(0.5)


def test_unjudged_documents_count_as_irrelevant():
    qrels = [Qrel(1, "a", 2)]
    report = evaluate_run({1: ["mystery", "a"]}, qrels, cutoffs=(1, 2))
    assert report.per_topic[1]["P@1"] == 0.0
    assert report.per_topic[1]["P@2"] == pytest.approx(0.5)


def test_pairwise_swap_monotonicity():
    """Moving a relevant doc earlier past an irrelevant one never hurts."""
    rng = random.Random(1234)
    for _ in range(1000):
        n = rng.randint(2, 12)
        docs = [f"d{i}" for i in range(n)]
        qrels = {d: rng.randint(0, 3) for d in docs}
        if not any(g >= 1 for g in qrels.values()):
            qrels[docs[0]] = rng.randint(1, 3)
        ranking = docs[:]
        rng.shuffle(ranking)
        # find an (irrelevant, relevant) adjacent pair and swap them forward
        for i in range(n - 1):
            if qrels[ranking[i]] == 0 and qrels[ranking[i + 1]] >= 1:
                swapped = ranking[:]
                swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
                k = rng.choice([1, 2, 5, n])
                assert precision_at_k(swapped, qrels, k) >= precision_at_k(ranking, qrels, k)
                assert average_precision(swapped, qrels) >= average_precision(ranking, qrels)
                assert ndcg_at_k(swapped, qrels, k) >= ndcg_at_k(ranking, qrels, k) - 1e-12
                break


def test_permutation_invariance_of_docnos():
    rng = random.Random(42)
    for _ in range(200):
        n = rng.randint(2, 10)
        docs = [f"d{i}" for i in range(n)]
        qrels = {d: rng.randint(0, 3) for d in docs}
        if not any(g >= 1 for g in qrels.values()):
            qrels[docs[0]] = 2
        ranking = docs[:]
        rng.shuffle(ranking)
        mapping = {d: f"renamed-{i}" for i, d in enumerate(docs)}
        ranking2 = [mapping[d] for d in ranking]
        qrels2 = {mapping[d]: g for d, g in qrels.items()}
        for k in (1, 3, n):
            assert precision_at_k(ranking, qrels, k) == precision_at_k(ranking2, qrels2, k)
            assert ndcg_at_k(ranking, qrels, k) == ndcg_at_k(ranking2, qrels2, k)
        assert average_precision(ranking, qrels) == average_precision(ranking2, qrels2)


def test_report_renderings_are_deterministic():
    qrels = [Qrel(1, "a", 3), Qrel(1, "b", 1)]
    run = {1: ["a", "b"]}
    report = evaluate_run(run, qrels, run_tag="demo", qrels_tag="fixture")
    csv_text = render_csv(report)
    txt = render_text(report)
    assert csv_text == render_csv(evaluate_run(run, qrels, run_tag="demo", qrels_tag="fixture"))
    assert "P@5" in csv_text and "NDCG" in csv_text
    assert "demo" in txt and "mean" in txt
