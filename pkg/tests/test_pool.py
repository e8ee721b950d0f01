"""Balanced interleaving and pool construction."""

import random

import pytest

from tetunir.corpus import Document, Topic
from tetunir.index import InvertedIndex
from tetunir.pool import balanced_interleave, build_pools, load_pools, save_pools
from tetunir.textnorm import NormConfig


def test_identical_lists_truncate():
    pool = balanced_interleave(list("abcd"), list("abcd"), depth=3)
    assert pool.docnos == ["a", "b", "c"]


def test_alternation_hand_trace():
    pool = balanced_interleave(["1", "2"], ["3", "4"], depth=4)
    assert pool.docnos == ["1", "3", "2", "4"]


def test_duplicate_skip_hand_trace():
    pool = balanced_interleave(["1", "2"], ["2", "3"], depth=3)
    assert pool.docnos == ["1", "2", "3"]


def test_exhaustion_stops_early():
    pool = balanced_interleave(["1", "2"], ["2"], depth=10)
    assert pool.docnos == ["1", "2"]


def test_provenance_records_sources_and_ranks():
    pool = balanced_interleave(["a", "b"], ["b", "c"], depth=3, source_tags=("bm25", "lm"))
    assert pool.provenance["a"] == {"bm25": 1}
    assert pool.provenance["b"] == {"bm25": 2, "lm": 1}
    assert pool.provenance["c"] == {"lm": 2}


def test_duplicates_within_one_list_rejected():
    with pytest.raises(ValueError):
        balanced_interleave(["a", "a"], ["b"], depth=2)


def test_depth_validation():
    with pytest.raises(ValueError):
        balanced_interleave(["a"], ["b"], depth=0)


def _random_lists(rng):
    universe = [f"d{i}" for i in range(rng.randint(1, 40))]
    a = rng.sample(universe, rng.randint(0, len(universe)))
    b = rng.sample(universe, rng.randint(0, len(universe)))
    return a, b


def test_pool_properties_over_random_pairs():
    rng = random.Random(987)
    for _ in range(1000):
        a, b = _random_lists(rng)
        depth = rng.randint(1, 50)
        pool = balanced_interleave(a, b, depth=depth)

        # dedup and bounded size
        assert len(set(pool.docnos)) == len(pool.docnos)
        assert len(pool.docnos) <= depth
        # pool subset of the union
        assert set(pool.docnos) <= set(a) | set(b)
        # determinism
        again = balanced_interleave(a, b, depth=depth)
        assert again.docnos == pool.docnos

        # prefix fairness while neither list is exhausted: count documents
        # contributed by each side; a document present in both lists is
        # attributed to the side whose turn drew it
        drawn_a = drawn_b = 0
        remaining_a = [d for d in a]
        remaining_b = [d for d in b]
        for i, docno in enumerate(pool.docnos):
            # replay: the drawing side is whichever cursor produced docno
            if docno in remaining_a and (drawn_a <= drawn_b or docno not in remaining_b):
                drawn_a += 1
            else:
                drawn_b += 1
            pooled = set(pool.docnos[: i + 1])
            a_left = any(d not in pooled for d in a)
            b_left = any(d not in pooled for d in b)
            if a_left and b_left:
                assert abs(drawn_a - drawn_b) <= 1, (a, b, pool.docnos)


def _toy_index():
    docs = [
        Document("d1", title="tasi boot loro"),
        Document("d2", title="tasi mean"),
        Document("d3", title="loro manas rai"),
        Document("d4", title="foho lulik"),
    ]
    return InvertedIndex.build(docs, "title", NormConfig())


def test_build_pools_defaults_to_bm25_and_dirichlet():
    idx = _toy_index()
    topics = [Topic(1, "tasi loro"), Topic(2, "krokodilu")]
    pools = build_pools(topics, idx, depth=3)
    assert pools[0].topic_id == 1
    assert 0 < len(pools[0].docnos) <= 3
    for docno, sources in pools[0].provenance.items():
        assert set(sources) <= {"bm25", "dirichlet_lm"}
    # topic matching nothing yields an empty, flagged pool
    assert pools[1].empty


def test_pools_json_round_trip(tmp_path):
    idx = _toy_index()
    pools = build_pools([Topic(1, "tasi")], idx, depth=5)
    path = tmp_path / "pools.json"
    save_pools(pools, path, source_tags=("bm25", "dirichlet_lm"))
    loaded = load_pools(path)
    assert loaded[0].topic_id == pools[0].topic_id
    assert loaded[0].docnos == pools[0].docnos
    assert loaded[0].provenance == pools[0].provenance
