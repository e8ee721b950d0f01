"""Graded-relevance evaluation of runs against qrels.

Binarization for P@k and MAP treats grade >= 1 as relevant; NDCG uses
the raw grades.  Documents missing from the qrels count as grade 0.
Gain is linear by default (``gain(g) = g``); an exponential alternative
(``2**g - 1``) can be selected and is recorded in the report header so
the two are never silently mixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Sequence, Tuple, Union

from .corpus import Qrel, RunEntry

DEFAULT_CUTOFFS = (5, 10, 20)

GAIN_CHOICES = ("linear", "exp")


def _gain(grade: int, gain: str) -> float:
    if gain == "linear":
        return float(grade)
    if gain == "exp":
        return float(2**grade - 1)
    raise ValueError(f"gain must be one of {GAIN_CHOICES}, got {gain!r}")


def precision_at_k(ranked: Sequence[str], qrels: Mapping[str, int], k: int) -> float:
    """|relevant in top-k| / k; a short ranking pads with irrelevant."""
    if k < 1:
        raise ValueError("k must be >= 1")
    hits = sum(1 for docno in ranked[:k] if qrels.get(docno, 0) >= 1)
    return hits / k


def average_precision(
    ranked: Sequence[str], qrels: Mapping[str, int], k: int | None = None
) -> float:
    """(sum of P@i over relevant hits at ranks i <= k) / R.

    R is the total number of relevant documents in the qrels for the
    topic, regardless of the cutoff.  Raises when R = 0; such topics are
    skipped (and flagged) by ``evaluate_run``.
    """
    total_relevant = sum(1 for grade in qrels.values() if grade >= 1)
    if total_relevant == 0:
        raise ValueError("topic has no relevant documents in the qrels")
    limit = len(ranked) if k is None else min(k, len(ranked))
    hits = 0
    precision_sum = 0.0
    for i in range(limit):
        if qrels.get(ranked[i], 0) >= 1:
            hits += 1
            precision_sum += hits / (i + 1)
    return precision_sum / total_relevant


def ndcg_at_k(
    ranked: Sequence[str],
    qrels: Mapping[str, int],
    k: int | None = None,
    gain: str = "linear",
) -> float:
    """DCG@k / IDCG@k with discount log2(i+1); 0 when IDCG is 0."""
    limit = len(ranked) if k is None else min(k, len(ranked))
    dcg = sum(
        _gain(qrels.get(ranked[i], 0), gain) / math.log2(i + 2) for i in range(limit)
    )
    ideal_grades = sorted(qrels.values(), reverse=True)
    if k is not None:
        ideal_grades = ideal_grades[:k]
    idcg = sum(
        _gain(grade, gain) / math.log2(i + 2) for i, grade in enumerate(ideal_grades)
    )
    if idcg == 0:
        return 0.0
    return dcg / idcg


@dataclass
class MetricReport:
    """Per-topic metric values, their means, and skipped topics."""

    run_tag: str
    qrels_tag: str
    gain: str
    cutoffs: Tuple[int, ...]
    per_topic: Dict[int, Dict[str, float]] = field(default_factory=dict)
    means: Dict[str, float] = field(default_factory=dict)
    skipped_topics: List[int] = field(default_factory=list)

    @property
    def metric_names(self) -> List[str]:
        names = [f"P@{k}" for k in self.cutoffs]
        names += [f"MAP@{k}" for k in self.cutoffs]
        names += [f"NDCG@{k}" for k in self.cutoffs]
        names += ["MAP", "NDCG"]
        return names


RunInput = Union[Sequence[RunEntry], Mapping[int, Sequence[str]]]
QrelInput = Union[Sequence[Qrel], Mapping[int, Mapping[str, int]]]


def _rankings_by_topic(run: RunInput) -> Dict[int, List[str]]:
    if isinstance(run, Mapping):
        return {topic: list(docnos) for topic, docnos in run.items()}
    grouped: Dict[int, List[Tuple[int, str]]] = {}
    for entry in run:
        grouped.setdefault(entry.topic_id, []).append((entry.rank, entry.docno))
    return {
        topic: [docno for _, docno in sorted(pairs)]
        for topic, pairs in grouped.items()
    }


def _grades_by_topic(qrels: QrelInput) -> Dict[int, Dict[str, int]]:
    if isinstance(qrels, Mapping):
        return {topic: dict(grades) for topic, grades in qrels.items()}
    grouped: Dict[int, Dict[str, int]] = {}
    for qrel in qrels:
        grouped.setdefault(qrel.topic_id, {})[qrel.docno] = qrel.grade
    return grouped


def evaluate_run(
    run: RunInput,
    qrels: QrelInput,
    cutoffs: Sequence[int] = DEFAULT_CUTOFFS,
    gain: str = "linear",
    run_tag: str = "run",
    qrels_tag: str = "qrels",
) -> MetricReport:
    """Evaluate a run topic by topic and average over evaluated topics.

    Topics absent from the qrels, or with no relevant document, are
    listed in ``skipped_topics`` and excluded from the means.
    """
    if gain not in GAIN_CHOICES:
        raise ValueError(f"gain must be one of {GAIN_CHOICES}, got {gain!r}")
    rankings = _rankings_by_topic(run)
    grades = _grades_by_topic(qrels)

    report = MetricReport(run_tag, qrels_tag, gain, tuple(cutoffs))
    for topic_id in sorted(rankings):
        ranked = rankings[topic_id]
        topic_qrels = grades.get(topic_id)
        if not topic_qrels or not any(g >= 1 for g in topic_qrels.values()):
            report.skipped_topics.append(topic_id)
            continue
        values: Dict[str, float] = {}
        for k in cutoffs:
            values[f"P@{k}"] = precision_at_k(ranked, topic_qrels, k)
            values[f"MAP@{k}"] = average_precision(ranked, topic_qrels, k)
            values[f"NDCG@{k}"] = ndcg_at_k(ranked, topic_qrels, k, gain)
        values["MAP"] = average_precision(ranked, topic_qrels)
        values["NDCG"] = ndcg_at_k(ranked, topic_qrels, None, gain)
        report.per_topic[topic_id] = values

    if report.per_topic:
        for name in report.metric_names:
            report.means[name] = sum(
                values[name] for values in report.per_topic.values()
            ) / len(report.per_topic)
    else:
        report.means = {name: 0.0 for name in report.metric_names}
    return report


def render_csv(report: MetricReport) -> str:
    lines = [
        f"# run={report.run_tag} qrels={report.qrels_tag} gain={report.gain}",
        "topic," + ",".join(report.metric_names),
    ]
    for topic_id in sorted(report.per_topic):
        values = report.per_topic[topic_id]
        lines.append(
            f"{topic_id},"
            + ",".join(format(values[name], ".4f") for name in report.metric_names)
        )
    lines.append(
        "mean,"
        + ",".join(format(report.means[name], ".4f") for name in report.metric_names)
    )
    for topic_id in report.skipped_topics:
        lines.append(f"# skipped topic {topic_id}: no relevant documents in qrels")
    return "\n".join(lines) + "\n"


def render_text(report: MetricReport) -> str:
    names = report.metric_names
    width = max(len(n) for n in names) + 2
    header = "topic".ljust(8) + "".join(n.rjust(width) for n in names)
    lines = [
        f"run={report.run_tag} qrels={report.qrels_tag} gain={report.gain}",
        header,
        "-" * len(header),
    ]
    for topic_id in sorted(report.per_topic):
        values = report.per_topic[topic_id]
        lines.append(
            str(topic_id).ljust(8)
            + "".join(format(values[n], ".4f").rjust(width) for n in names)
        )
    lines.append(
        "mean".ljust(8)
        + "".join(format(report.means[n], ".4f").rjust(width) for n in names)
    )
    if report.skipped_topics:
        lines.append(
            "skipped topics (no relevant documents): "
            + ", ".join(map(str, report.skipped_topics))
        )
    return "\n".join(lines) + "\n"
