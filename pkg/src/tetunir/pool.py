"""Document pooling for relevance assessment.

Per topic, two retrieval models each contribute a ranked list; balanced
interleaving merges them by strict alternation (first list first, no
randomized starter, so pools are reproducible), skipping documents that
are already pooled, until the pool depth is reached or both lists are
exhausted.  Provenance records which source list(s) supplied each
document and at which rank.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

from .corpus import Topic
from .index import InvertedIndex
from .rank import RankParams, search

DEFAULT_POOL_DEPTH = 100

POOL_SCHEMA_VERSION = 1


@dataclass
class Pool:
    """Ordered assessment pool for one topic."""

    topic_id: int
    docnos: List[str] = field(default_factory=list)
    provenance: Dict[str, Dict[str, int]] = field(default_factory=dict)

    @property
    def empty(self) -> bool:
        return not self.docnos


def balanced_interleave(
    list_a: Sequence[str],
    list_b: Sequence[str],
    depth: int = DEFAULT_POOL_DEPTH,
    topic_id: int = 0,
    source_tags: tuple = ("A", "B"),
) -> Pool:
    """Merge two duplicate-free ranked lists by fair alternation."""
    if depth < 1:
        raise ValueError("pool depth must be >= 1")
    for tag, lst in zip(source_tags, (list_a, list_b)):
        if len(set(lst)) != len(lst):
            raise ValueError(f"source list {tag} contains duplicates")

    tag_a, tag_b = source_tags
    provenance: Dict[str, Dict[str, int]] = {}
    for rank, docno in enumerate(list_a, start=1):
        provenance.setdefault(docno, {})[tag_a] = rank
    for rank, docno in enumerate(list_b, start=1):
        provenance.setdefault(docno, {})[tag_b] = rank

    pooled: List[str] = []
    pooled_set: set = set()
    cursors = [0, 0]
    lists = [list(list_a), list(list_b)]
    turn = 0  # list A draws first
    while len(pooled) < depth:
        drew = False
        for attempt in range(2):
            side = (turn + attempt) % 2
            lst = lists[side]
            cur = cursors[side]
            while cur < len(lst) and lst[cur] in pooled_set:
                cur += 1
            cursors[side] = cur
            if cur < len(lst):
                docno = lst[cur]
                cursors[side] = cur + 1
                pooled.append(docno)
                pooled_set.add(docno)
                turn = (side + 1) % 2
                drew = True
                break
        if not drew:
            break  # both lists exhausted

    return Pool(
        topic_id=topic_id,
        docnos=pooled,
        provenance={docno: provenance[docno] for docno in pooled},
    )


def build_pools(
    topics: Iterable[Topic],
    index: InvertedIndex,
    params_a: Optional[RankParams] = None,
    params_b: Optional[RankParams] = None,
    depth: int = DEFAULT_POOL_DEPTH,
    **normalize_kwargs,
) -> List[Pool]:
    """Retrieve with both models per topic and interleave to depth.

    Defaults follow the pooling setup used for the test collection:
    BM25 as list A and the Dirichlet-smoothed language model as list B.
    """
    params_a = params_a or RankParams(model="bm25")
    params_b = params_b or RankParams(model="dirichlet_lm")
    pools = []
    for topic in topics:
        ranked_a = search(index, topic.title, params_a, depth, topic.topic_id,
                          **normalize_kwargs)
        ranked_b = search(index, topic.title, params_b, depth, topic.topic_id,
                          **normalize_kwargs)
        pools.append(
            balanced_interleave(
                [docno for docno, _ in ranked_a.entries],
                [docno for docno, _ in ranked_b.entries],
                depth=depth,
                topic_id=topic.topic_id,
                source_tags=(params_a.model, params_b.model),
            )
        )
    return pools


def save_pools(pools: Sequence[Pool], path, source_tags: tuple = ("A", "B")) -> None:
    payload = {
        "schema_version": POOL_SCHEMA_VERSION,
        "sources": list(source_tags),
        "pools": [
            {
                "topic_id": pool.topic_id,
                "docnos": pool.docnos,
                "provenance": pool.provenance,
            }
            for pool in pools
        ],
    }
    Path(path).write_text(
        json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )


def load_pools(path) -> List[Pool]:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("schema_version") != POOL_SCHEMA_VERSION:
        raise ValueError(f"unsupported pool schema {payload.get('schema_version')!r}")
    return [
        Pool(entry["topic_id"], list(entry["docnos"]), dict(entry["provenance"]))
        for entry in payload["pools"]
    ]
