"""Relevance-judgment capture, aggregation, agreement, and export.

Five assessors grade every pooled document on the 0..3 scale.  A grade
wins outright when it exceeds half of the round-1 votes; otherwise the
pair is tied between its two most frequent grades (higher grade first
on equal frequency) and goes to a second round, where three of the
original assessors choose between exactly those two options.  The final
grade is the mode of all eight votes; a persisting tie falls to the
higher grade.

Judgments persist in an append-only JSON-lines journal; replaying the
journal reconstructs the exact aggregation state.  A snapshot file can
be written at any time for human audit, but the journal remains the
source of truth.
"""

from __future__ import annotations

import json
import os
import threading
import time
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .corpus import Qrel

GRADES = (0, 1, 2, 3)

DEFAULT_ASSESSOR_COUNT = 5
SECOND_ROUND_VOTES = 3

# export rule: keep a topic only when 10 <= relevant documents < 100
MIN_RELEVANT_PER_TOPIC = 10
MAX_RELEVANT_PER_TOPIC = 100


class ConflictError(Exception):
    """Submission collides with an existing lock or vote."""


@dataclass(frozen=True)
class JudgmentRecord:
    assessor_id: str
    topic_id: int
    docno: str
    grade: int
    round: int
    timestamp: float

    def __post_init__(self):
        if self.grade not in GRADES:
            raise ValueError(f"grade must be in {GRADES}, got {self.grade}")
        if self.round not in (1, 2):
            raise ValueError(f"round must be 1 or 2, got {self.round}")


@dataclass(frozen=True)
class AggregatedQrel:
    topic_id: int
    docno: str
    grade: int
    status: str  # majority | second_round | tie_broken
    histogram: Mapping[int, int]


@dataclass(frozen=True)
class TiedPair:
    topic_id: int
    docno: str
    options: Tuple[int, int]
    votes: Tuple[int, ...]


@dataclass(frozen=True)
class AgreementReport:
    assessors: Tuple[str, ...]
    pairwise: Mapping[Tuple[str, str], float]
    average: float

    def value(self, a: str, b: str) -> float:
        if a == b:
            raise KeyError("kappa has no diagonal")
        return self.pairwise[(a, b) if (a, b) in self.pairwise else (b, a)]


# ---------------------------------------------------------------------------
# vote aggregation
# ---------------------------------------------------------------------------

def tie_options(votes: Sequence[int]) -> Tuple[int, int]:
    """Two candidate grades: frequency descending, higher grade first."""
    counts = Counter(votes)
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], -kv[0]))
    if len(ordered) < 2:
        raise ValueError(f"votes {votes!r} have no second option to tie with")
    return ordered[0][0], ordered[1][0]


def aggregate_pair(votes: Sequence[int], m: int) -> Tuple[str, object]:
    """('majority', grade) when one grade exceeds m/2, else ('tie', options)."""
    if len(votes) != m:
        raise ValueError(f"expected {m} votes, got {len(votes)}")
    counts = Counter(votes)
    grade, count = max(counts.items(), key=lambda kv: (kv[1], kv[0]))
    if count > m / 2:
        return "majority", grade
    return "tie", tie_options(votes)


def resolve_second_round(
    round1_votes: Sequence[int],
    round2_votes: Sequence[int],
    options: Tuple[int, int],
) -> Tuple[int, str]:
    """Final grade from the 8 merged votes; higher grade breaks a new tie."""
    for vote in round2_votes:
        if vote not in options:
            raise ValueError(f"round-2 vote {vote} outside the offered options {options}")
    if options[0] == options[1]:
        return options[0], "second_round"
    combined = Counter(list(round1_votes) + list(round2_votes))
    best = max(combined.values())
    top = [grade for grade, count in combined.items() if count == best]
    if len(top) == 1:
        return top[0], "second_round"
    return max(top), "tie_broken"


def aggregate(
    records: Iterable[JudgmentRecord], m: int = DEFAULT_ASSESSOR_COUNT
) -> Tuple[List[AggregatedQrel], List[TiedPair], List[Tuple[int, str, int]]]:
    """Aggregate round-1 records into majorities, ties, and incomplete pairs.

    Pairs without exactly ``m`` round-1 votes are flagged incomplete and
    excluded from aggregation.
    """
    votes: Dict[Tuple[int, str], List[int]] = {}
    seen: set = set()
    for record in records:
        if record.round != 1:
            continue
        key = (record.assessor_id, record.topic_id, record.docno)
        if key in seen:
            raise ValueError(f"duplicate round-1 record for {key}")
        seen.add(key)
        votes.setdefault((record.topic_id, record.docno), []).append(record.grade)

    aggregated: List[AggregatedQrel] = []
    ties: List[TiedPair] = []
    incomplete: List[Tuple[int, str, int]] = []
    for (topic_id, docno), pair_votes in sorted(votes.items()):
        if len(pair_votes) != m:
            incomplete.append((topic_id, docno, len(pair_votes)))
            continue
        outcome, payload = aggregate_pair(pair_votes, m)
        if outcome == "majority":
            aggregated.append(
                AggregatedQrel(
                    topic_id, docno, payload, "majority", dict(Counter(pair_votes))
                )
            )
        else:
            ties.append(
                TiedPair(topic_id, docno, payload, tuple(sorted(pair_votes, reverse=True)))
            )
    return aggregated, ties, incomplete


# ---------------------------------------------------------------------------
# inter-annotator agreement
# ---------------------------------------------------------------------------

def cohen_kappa(labels_a: Sequence[int], labels_b: Sequence[int]) -> float:
    """Chance-corrected agreement over 4-level labels.

    Defined as 1.0 when both assessors are constant and identical
    (chance agreement would be 1, leaving 0/0).
    """
    if len(labels_a) != len(labels_b):
        raise ValueError("label vectors differ in length")
    if not labels_a:
        raise ValueError("no shared judgments to compare")
    a = np.asarray(labels_a, dtype=int)
    b = np.asarray(labels_b, dtype=int)
    p_o = float(np.mean(a == b))
    marg_a = np.bincount(a, minlength=len(GRADES)) / len(a)
    marg_b = np.bincount(b, minlength=len(GRADES)) / len(b)
    p_e = float(marg_a @ marg_b)
    if p_e == 1.0:
        return 1.0
    return (p_o - p_e) / (1 - p_e)


def agreement_report(
    judgments: Mapping[str, Mapping[Tuple[int, str], int]]
) -> AgreementReport:
    """Pairwise kappa over each assessor pair's shared judged pairs."""
    assessors = tuple(sorted(judgments))
    if len(assessors) < 2:
        raise ValueError("need at least two assessors for agreement")
    pairwise: Dict[Tuple[str, str], float] = {}
    for i, a in enumerate(assessors):
        for b in assessors[i + 1 :]:
            shared = sorted(set(judgments[a]) & set(judgments[b]))
            if not shared:
                raise ValueError(f"assessors {a} and {b} share no judged pairs")
            pairwise[(a, b)] = cohen_kappa(
                [judgments[a][key] for key in shared],
                [judgments[b][key] for key in shared],
            )
    average = sum(pairwise.values()) / len(pairwise)
    return AgreementReport(assessors, pairwise, average)


# ---------------------------------------------------------------------------
# qrels export
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExclusionReport:
    dropped_topics: Tuple[Tuple[int, int, str], ...]  # (topic, relevant count, reason)
    grade_histogram: Mapping[int, int]
    n_topics: int
    n_qrels: int


def export_qrels(
    aggregated: Sequence[AggregatedQrel],
    min_relevant: int = MIN_RELEVANT_PER_TOPIC,
    max_relevant: int = MAX_RELEVANT_PER_TOPIC,
) -> Tuple[List[Qrel], ExclusionReport]:
    """Drop unreliable topics and emit the rest as qrels.

    A topic is dropped when its relevant count (grade >= 1) reaches
    ``max_relevant`` or falls below ``min_relevant``.
    """
    by_topic: Dict[int, List[AggregatedQrel]] = {}
    for entry in aggregated:
        by_topic.setdefault(entry.topic_id, []).append(entry)

    qrels: List[Qrel] = []
    dropped: List[Tuple[int, int, str]] = []
    histogram: Counter = Counter()
    kept_topics = 0
    for topic_id in sorted(by_topic):
        entries = by_topic[topic_id]
        relevant = sum(1 for e in entries if e.grade >= 1)
        if relevant >= max_relevant:
            dropped.append((topic_id, relevant, f"{relevant} relevant >= {max_relevant}"))
            continue
        if relevant < min_relevant:
            dropped.append((topic_id, relevant, f"{relevant} relevant < {min_relevant}"))
            continue
        kept_topics += 1
        for e in sorted(entries, key=lambda e: e.docno):
            qrels.append(Qrel(e.topic_id, e.docno, e.grade))
            histogram[e.grade] += 1

    report = ExclusionReport(
        dropped_topics=tuple(dropped),
        grade_histogram={g: histogram.get(g, 0) for g in GRADES},
        n_topics=kept_topics,
        n_qrels=len(qrels),
    )
    return qrels, report


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------

class JudgmentStore:
    """Append-only journal of submissions with per-(assessor, topic) locks.

    One journal line holds one complete submission (all grades of one
    topic by one assessor) so a submission is atomic: it is either fully
    present after a crash or absent.  Concurrent writers serialize on an
    internal lock.
    """

    def __init__(self, state_dir):
        self.state_dir = Path(state_dir)
        self.state_dir.mkdir(parents=True, exist_ok=True)
        self.journal_path = self.state_dir / "journal.jsonl"
        self._mutex = threading.Lock()
        self._records: List[JudgmentRecord] = []
        self._acks: Dict[Tuple[str, int], dict] = {}
        self._tie_votes: Dict[Tuple[int, str], Dict[str, int]] = {}
        if self.journal_path.exists():
            self._replay()

    # -- journal ------------------------------------------------------

    def _replay(self) -> None:
        with open(self.journal_path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    event = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ValueError(f"journal line {lineno} is not JSON: {exc}") from None
                self._apply(event)

    def _apply(self, event: dict) -> None:
        if event["event"] == "submit":
            assessor = event["assessor"]
            topic_id = event["topic_id"]
            for docno, grade in event["grades"].items():
                self._records.append(
                    JudgmentRecord(assessor, topic_id, docno, grade, 1, event["ts"])
                )
            self._acks[(assessor, topic_id)] = {
                "idempotency_key": event.get("idempotency_key"),
                "accepted": len(event["grades"]),
                "ts": event["ts"],
            }
        elif event["event"] == "tie_vote":
            assessor = event["assessor"]
            key = (event["topic_id"], event["docno"])
            self._records.append(
                JudgmentRecord(
                    assessor, event["topic_id"], event["docno"], event["grade"], 2, event["ts"]
                )
            )
            self._tie_votes.setdefault(key, {})[assessor] = event["grade"]
        else:
            raise ValueError(f"unknown journal event {event.get('event')!r}")

    def _append(self, event: dict) -> None:
        line = json.dumps(event, sort_keys=True, ensure_ascii=False)
        with open(self.journal_path, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    # -- submissions ----------------------------------------------------

    def is_locked(self, assessor: str, topic_id: int) -> bool:
        return (assessor, topic_id) in self._acks

    def completed_topics(self, assessor: str) -> List[int]:
        return sorted(t for (a, t) in self._acks if a == assessor)

    def submit_judgments(
        self,
        assessor: str,
        topic_id: int,
        grades: Mapping[str, int],
        pool_docnos: Sequence[str],
        idempotency_key: Optional[str] = None,
        now: Optional[float] = None,
    ) -> dict:
        """Persist a complete set of grades for one topic, then lock it."""
        pool_set = set(pool_docnos)
        missing = sorted(pool_set - set(grades))
        if missing:
            raise ValueError(f"missing grades for {len(missing)} documents: {missing[:10]}")
        extra = sorted(set(grades) - pool_set)
        if extra:
            raise ValueError(f"grades for documents outside the pool: {extra[:10]}")
        bad = {d: g for d, g in grades.items() if g not in GRADES}
        if bad:
            raise ValueError(f"grades outside {GRADES}: {dict(list(bad.items())[:5])}")

        with self._mutex:
            existing = self._acks.get((assessor, topic_id))
            if existing is not None:
                if idempotency_key is not None and existing["idempotency_key"] == idempotency_key:
                    return dict(existing)  # duplicate delivery of the same submission
                raise ConflictError(
                    f"topic {topic_id} is already completed by {assessor}"
                )
            event = {
                "event": "submit",
                "assessor": assessor,
                "topic_id": topic_id,
                "grades": dict(sorted(grades.items())),
                "idempotency_key": idempotency_key,
                "ts": time.time() if now is None else now,
            }
            self._append(event)
            self._apply(event)
            return dict(self._acks[(assessor, topic_id)])

    def submit_tie_vote(
        self,
        assessor: str,
        topic_id: int,
        docno: str,
        grade: int,
        options: Tuple[int, int],
        now: Optional[float] = None,
    ) -> dict:
        if grade not in options:
            raise ValueError(f"vote {grade} is not among the offered options {options}")
        with self._mutex:
            existing = self._tie_votes.get((topic_id, docno), {})
            if assessor in existing:
                raise ConflictError(
                    f"{assessor} already voted on the tie for topic {topic_id} doc {docno}"
                )
            event = {
                "event": "tie_vote",
                "assessor": assessor,
                "topic_id": topic_id,
                "docno": docno,
                "grade": grade,
                "ts": time.time() if now is None else now,
            }
            self._append(event)
            self._apply(event)
            return {"votes": len(self._tie_votes[(topic_id, docno)])}

    # -- views ----------------------------------------------------------

    def records(self) -> List[JudgmentRecord]:
        return list(self._records)

    def round1_records(self) -> List[JudgmentRecord]:
        return [r for r in self._records if r.round == 1]

    def tie_votes(self) -> Dict[Tuple[int, str], Dict[str, int]]:
        return {key: dict(votes) for key, votes in self._tie_votes.items()}

    def judgments_by_assessor(self) -> Dict[str, Dict[Tuple[int, str], int]]:
        out: Dict[str, Dict[Tuple[int, str], int]] = {}
        for record in self._records:
            if record.round == 1:
                out.setdefault(record.assessor_id, {})[
                    (record.topic_id, record.docno)
                ] = record.grade
        return out

    def snapshot(self, path=None) -> Path:
        """Write an audit snapshot; the journal stays authoritative."""
        path = Path(path) if path else self.state_dir / "snapshot.json"
        payload = {
            "n_records": len(self._records),
            "submissions": [
                {"assessor": a, "topic_id": t, **ack}
                for (a, t), ack in sorted(self._acks.items())
            ],
            "tie_votes": [
                {"topic_id": t, "docno": d, "votes": votes}
                for (t, d), votes in sorted(self._tie_votes.items())
            ],
        }
        path.write_text(
            json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
        return path
