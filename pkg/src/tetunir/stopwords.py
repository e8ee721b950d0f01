"""Stopword detection, scoring, and the bundled Tetun list.

Candidate stopwords are found two ways: classic corpus-level term
weighting (TF, IDF, TF-IDF) and topological properties of a directed
word co-occurrence graph (in-degree, out-degree, degree).  Candidate
rankings are scored with precision-at-n against a ground-truth list.

The package ships the curated 160-entry Tetun stopword list together
with a spelling-variant map used by the preprocessing corrector.
"""

from __future__ import annotations

import importlib.resources
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Sequence

from .textnorm import TokenStream

RANK_METHODS = ("tf", "idf", "tfidf", "in_degree", "out_degree", "degree")

DEFAULT_CUTOFFS = (10, 25, 50, 75, 100, 250, 500, 750, 1000)


@dataclass(frozen=True)
class TermScore:
    """Corpus-aggregate weight of one term."""

    term: str
    tf: int
    df: int
    idf: float
    tfidf: float


def score_terms(corpus: Sequence[TokenStream]) -> Dict[str, TermScore]:
    """Compute tf, df, idf = ln(N/df) and tfidf = tf*idf per term.

    ``corpus`` is a sequence of already-tokenized documents.  Raises on
    an empty corpus (N is the idf denominator).
    """
    counts = _count_terms(corpus)
    return _finish_scores(counts)


def _count_terms(corpus: Sequence[TokenStream]):
    n_docs = 0
    tf: Dict[str, int] = {}
    df: Dict[str, int] = {}
    for doc in corpus:
        n_docs += 1
        seen = set()
        for token in doc:
            tf[token] = tf.get(token, 0) + 1
            seen.add(token)
        for token in seen:
            df[token] = df.get(token, 0) + 1
    return n_docs, tf, df


def merge_term_counts(a, b):
    """Associative merge of two ``_count_terms`` results (partitioned corpora)."""
    n_a, tf_a, df_a = a
    n_b, tf_b, df_b = b
    tf = dict(tf_a)
    for term, count in tf_b.items():
        tf[term] = tf.get(term, 0) + count
    df = dict(df_a)
    for term, count in df_b.items():
        df[term] = df.get(term, 0) + count
    return n_a + n_b, tf, df


def _finish_scores(counts) -> Dict[str, TermScore]:
    n_docs, tf, df = counts
    if n_docs == 0:
        raise ValueError("cannot score terms of an empty corpus")
    scores = {}
    for term, term_tf in tf.items():
        term_df = df[term]
        idf = math.log(n_docs / term_df)
        scores[term] = TermScore(term, term_tf, term_df, idf, term_tf * idf)
    return scores


@dataclass
class CooccurrenceGraph:
    """Directed word-adjacency graph with multiplicity collapsed.

    An edge u->v exists when v immediately follows u somewhere in a
    document; degrees count distinct neighbours, not occurrences.
    """

    successors: Dict[str, set] = field(default_factory=dict)
    predecessors: Dict[str, set] = field(default_factory=dict)

    def add_document(self, tokens: TokenStream) -> None:
        for token in tokens:
            self.successors.setdefault(token, set())
            self.predecessors.setdefault(token, set())
        for prev, cur in zip(tokens, tokens[1:]):
            self.successors[prev].add(cur)
            self.predecessors[cur].add(prev)

    def merge(self, other: "CooccurrenceGraph") -> "CooccurrenceGraph":
        merged = CooccurrenceGraph(
            {k: set(v) for k, v in self.successors.items()},
            {k: set(v) for k, v in self.predecessors.items()},
        )
        for node, succ in other.successors.items():
            merged.successors.setdefault(node, set()).update(succ)
        for node, pred in other.predecessors.items():
            merged.predecessors.setdefault(node, set()).update(pred)
        return merged

    @property
    def nodes(self):
        return self.successors.keys()

    def out_degree(self, term: str) -> int:
        return len(self.successors[term])

    def in_degree(self, term: str) -> int:
        return len(self.predecessors[term])

    def degree(self, term: str) -> int:
        return self.in_degree(term) + self.out_degree(term)


def build_graph(corpus: Sequence[TokenStream]) -> CooccurrenceGraph:
    graph = CooccurrenceGraph()
    for doc in corpus:
        graph.add_document(doc)
    return graph


class StopwordDetector:
    """One-pass holder of the term scores and graph for a corpus."""

    def __init__(self, corpus: Sequence[TokenStream]):
        corpus = list(corpus)
        self.scores = score_terms(corpus)
        self.graph = build_graph(corpus)

    def rank(self, method: str, n: int) -> List[str]:
        return rank_candidates(method, n, scores=self.scores, graph=self.graph)


def rank_candidates(
    method: str,
    n: int,
    *,
    scores: Mapping[str, TermScore] | None = None,
    graph: CooccurrenceGraph | None = None,
) -> List[str]:
    """Top-n terms under one detection method.

    tf/tfidf and the degree methods sort descending; idf sorts ascending
    so the most common terms come first.  Ties break lexicographically.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if method not in RANK_METHODS:
        raise ValueError(f"unknown ranking method {method!r}")

    if method in ("tf", "idf", "tfidf"):
        if scores is None:
            raise ValueError(f"method {method!r} needs term scores")
        if method == "idf":
            ordered = sorted(scores.values(), key=lambda s: (s.idf, s.term))
        else:
            ordered = sorted(
                scores.values(), key=lambda s: (-getattr(s, method), s.term)
            )
        return [s.term for s in ordered[:n]]

    if graph is None:
        raise ValueError(f"method {method!r} needs a co-occurrence graph")
    degree_fn = getattr(graph, method)
    ordered_terms = sorted(graph.nodes, key=lambda t: (-degree_fn(t), t))
    return ordered_terms[:n]


def precision_at(
    candidates: Sequence[str],
    truth: "StopwordList | Iterable[str]",
    cutoffs: Sequence[int] = DEFAULT_CUTOFFS,
) -> Dict[int, float]:
    """P@n = |top-n intersected with truth| / n for each cutoff."""
    truth_set = set(truth.words) if isinstance(truth, StopwordList) else set(truth)
    if not truth_set:
        raise ValueError("ground-truth stopword list is empty")
    result = {}
    for cutoff in cutoffs:
        if cutoff < 1:
            raise ValueError("cutoffs must be >= 1")
        top = candidates[:cutoff]
        result[cutoff] = sum(1 for term in top if term in truth_set) / cutoff
    return result


@dataclass(frozen=True)
class StopwordList:
    """Canonical stopwords plus a misspelling -> canonical map."""

    words: tuple
    variant_map: Mapping[str, str]

    def __post_init__(self):
        if len(set(self.words)) != len(self.words):
            raise ValueError("canonical stopword entries must be unique")
        canon = set(self.words)
        bad = {v for v in self.variant_map.values() if v not in canon}
        if bad:
            raise ValueError(f"variants map to non-canonical entries: {sorted(bad)[:5]}")

    def __contains__(self, token: str) -> bool:
        return token in self._word_set

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    @property
    def _word_set(self):
        # frozen dataclass: cache on first use
        cached = self.__dict__.get("_word_set_cache")
        if cached is None:
            cached = frozenset(self.words)
            self.__dict__["_word_set_cache"] = cached
        return cached

    def correct(self, token: str) -> str:
        """Map a known misspelling to its canonical form; idempotent."""
        return self.variant_map.get(token, token)

    @classmethod
    def from_lines(cls, word_lines: Iterable[str], variant_lines: Iterable[str] = ()) -> "StopwordList":
        words = []
        for raw in word_lines:
            line = raw.strip()
            if line and not line.startswith("#"):
                words.append(line)
        variants = {}
        for raw in variant_lines:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                variant, canonical = line.split("\t")
            except ValueError as exc:
                raise ValueError(f"bad variant line (want variant<TAB>canonical): {line!r}") from exc
            variants[variant] = canonical
        return cls(tuple(words), variants)

    @classmethod
    def load(cls, words_path, variants_path=None) -> "StopwordList":
        with open(words_path, encoding="utf-8") as fh:
            word_lines = fh.readlines()
        variant_lines: list = []
        if variants_path is not None:
            with open(variants_path, encoding="utf-8") as fh:
                variant_lines = fh.readlines()
        return cls.from_lines(word_lines, variant_lines)

    @classmethod
    def bundled(cls) -> "StopwordList":
        return _bundled_list()


@lru_cache(maxsize=1)
def _bundled_list() -> StopwordList:
    data = importlib.resources.files("tetunir.data")
    words = data.joinpath("stopwords_tet.txt").read_text(encoding="utf-8")
    variants = data.joinpath("stopword_variants_tet.tsv").read_text(encoding="utf-8")
    lst = StopwordList.from_lines(words.splitlines(), variants.splitlines())
    if len(lst) != 160:
        raise RuntimeError(f"bundled stopword list has {len(lst)} entries, expected 160")
    return lst


def correct_variants(token: str, stopword_list: StopwordList) -> str:
    return stopword_list.correct(token)
