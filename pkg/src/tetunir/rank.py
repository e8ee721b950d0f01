"""Scoring models and top-k retrieval over an inverted index.

Five models are supported; a document's score is the sum over query
terms of the per-term weight below (qtf = term count in the query,
tf = term count in the document, dl = document length, N = documents,
C = total collection tokens, df/cf = document/collection frequency).
Query terms absent from the collection contribute nothing.

* ``bm25``         qtf * max(0, ln((N-df+0.5)/(df+0.5)))
                       * tf*(k1+1) / (tf + k1*(1-b+b*dl/avdl))
* ``tfidf``        qtf * tf/(tf + k1*(1-b+b*dl/avdl)) * ln(1 + N/df)
* ``dfr_bm25``     BM25's saturation with log2((N+1)/(df+0.5)) in place
                   of the RSJ idf
* ``dirichlet_lm`` qtf * ln((tf + mu*cf/C)/(dl + mu))
* ``hiemstra_lm``  qtf * ln(1 + lambda*tf*C/((1-lambda)*cf*dl))

Only documents sharing at least one query term are scored; ties break
by docno ascending so rankings are a deterministic total order.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .corpus import RunEntry, Topic
from .index import InvertedIndex
from .textnorm import normalize

MODEL_CHOICES = ("tfidf", "bm25", "dfr_bm25", "dirichlet_lm", "hiemstra_lm")


@dataclass(frozen=True)
class RankParams:
    """Model choice plus the standard constants, at platform defaults."""

    model: str = "bm25"
    k1: float = 1.2
    b: float = 0.75
    mu: float = 2500.0
    lambda_: float = 0.15

    def __post_init__(self):
        if self.model not in MODEL_CHOICES:
            raise ValueError(f"model must be one of {MODEL_CHOICES}, got {self.model!r}")
        if self.k1 <= 0:
            raise ValueError("k1 must be > 0")
        if not 0 <= self.b <= 1:
            raise ValueError("b must be in [0, 1]")
        if self.mu <= 0:
            raise ValueError("mu must be > 0")
        if not 0 < self.lambda_ < 1:
            raise ValueError("lambda must be in (0, 1)")


def term_weight(
    params: RankParams,
    qtf: int,
    tf: int,
    df: int,
    cf: int,
    dl: int,
    n_docs: int,
    avdl: float,
    total_tokens: int,
) -> float:
    """Per-term contribution of one (query term, document) pair."""
    if df == 0:
        return 0.0
    model = params.model
    if model in ("bm25", "tfidf", "dfr_bm25"):
        saturation_k = params.k1 * (1 - params.b + params.b * dl / avdl)
        if model == "bm25":
            idf = max(0.0, math.log((n_docs - df + 0.5) / (df + 0.5)))
            return qtf * idf * tf * (params.k1 + 1) / (tf + saturation_k)
        if model == "dfr_bm25":
            info = math.log2((n_docs + 1) / (df + 0.5))
            return qtf * info * tf * (params.k1 + 1) / (tf + saturation_k)
        return qtf * (tf / (tf + saturation_k)) * math.log(1 + n_docs / df)
    if model == "dirichlet_lm":
        prior = params.mu * cf / total_tokens
        return qtf * math.log((tf + prior) / (dl + params.mu))
    # hiemstra_lm: absent terms (tf == 0) contribute log(1) == 0
    if tf == 0:
        return 0.0
    return qtf * math.log(
        1 + (params.lambda_ * tf * total_tokens) / ((1 - params.lambda_) * cf * dl)
    )


@dataclass
class RankedList:
    """Descending-score retrieval result for one query."""

    topic_id: Optional[int]
    entries: List[Tuple[str, float]] = field(default_factory=list)
    empty_query: bool = False

    def to_run_entries(self, run_tag: str) -> List[RunEntry]:
        if self.topic_id is None:
            raise ValueError("RankedList has no topic_id to emit run entries for")
        return [
            RunEntry(self.topic_id, docno, rank, score, run_tag)
            for rank, (docno, score) in enumerate(self.entries, start=1)
        ]


def score_candidates(
    index: InvertedIndex, query_tokens: Sequence[str], params: RankParams
) -> Dict[int, float]:
    """Score every document sharing a term with the query."""
    qtfs = Counter(query_tokens)
    stats = index.stats()
    matched: Dict[str, Dict[int, int]] = {}
    candidates: set = set()
    for term in qtfs:
        plist = index.postings_for(term)
        if plist:
            matched[term] = dict(plist)
            candidates.update(doc_id for doc_id, _ in plist)

    scores: Dict[int, float] = {}
    for doc_id in candidates:
        dl = index.doc_length(doc_id)
        total = 0.0
        for term, qtf in qtfs.items():
            df = index.df(term)
            if df == 0:
                continue
            tf = matched[term].get(doc_id, 0)
            total += term_weight(
                params,
                qtf,
                tf,
                df,
                index.cf(term),
                dl,
                stats.n_docs,
                stats.avdl,
                stats.total_tokens,
            )
        scores[doc_id] = total
    return scores


def search(
    index: InvertedIndex,
    query: str,
    params: RankParams,
    k: int,
    topic_id: Optional[int] = None,
    **normalize_kwargs,
) -> RankedList:
    """Top-k search; the query is normalized with the index's own config."""
    if k < 1:
        raise ValueError("k must be >= 1")
    tokens = normalize(query, index.config, **normalize_kwargs)
    if not tokens:
        return RankedList(topic_id=topic_id, entries=[], empty_query=True)
    scores = score_candidates(index, tokens, params)
    ordered = sorted(
        ((index.docno(doc_id), score) for doc_id, score in scores.items()),
        key=lambda pair: (-pair[1], pair[0]),
    )
    return RankedList(topic_id=topic_id, entries=ordered[:k])


def search_topics(
    index: InvertedIndex,
    topics: Iterable[Topic],
    params: RankParams,
    k: int,
    run_tag: str,
    **normalize_kwargs,
) -> List[RunEntry]:
    """Run every topic title as a query and collect TREC run entries."""
    entries: List[RunEntry] = []
    for topic in topics:
        ranked = search(
            index, topic.title, params, k, topic_id=topic.topic_id, **normalize_kwargs
        )
        entries.extend(ranked.to_run_entries(run_tag))
    return entries
