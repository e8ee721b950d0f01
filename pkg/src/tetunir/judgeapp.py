"""HTTP+JSON surface of the relevance-assessment service.

Assessors authenticate with static bearer tokens from a config file.
All responses carry ``schema_version``.  Endpoints:

    GET  /topics                     topic list with completion state
    GET  /topics/{id}/pool           pooled documents for judging
    POST /topics/{id}/judgments      submit all grades for one topic
    GET  /ties                       tied pairs awaiting a second round
    POST /ties/{pair}/resolution     one second-round vote (pair = "topic:docno")
    GET  /agreement                  pairwise Cohen's kappa matrix
    GET  /export/qrels               final qrels plus the exclusion report
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple

from fastapi import Depends, FastAPI, Header, HTTPException
from pydantic import BaseModel

from .corpus import Document, Topic, write_qrels
from .judge import (
    AggregatedQrel,
    ConflictError,
    JudgmentStore,
    SECOND_ROUND_VOTES,
    TiedPair,
    agreement_report,
    aggregate,
    export_qrels,
    resolve_second_round,
)
from .pool import Pool

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class JudgeConfig:
    """Static service configuration: who may assess, and how many must."""

    tokens: Mapping[str, str]  # bearer token -> assessor id
    second_round_assessors: Tuple[str, ...]
    expected_votes: int = 5

    @classmethod
    def load(cls, path) -> "JudgeConfig":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        tokens = {token: assessor for assessor, token in data["assessors"].items()}
        if len(tokens) != len(data["assessors"]):
            raise ValueError("assessor tokens must be unique")
        return cls(
            tokens=tokens,
            second_round_assessors=tuple(data["second_round_assessors"]),
            expected_votes=int(data.get("expected_votes", 5)),
        )


class JudgeService:
    """Workbench state shared by all endpoints."""

    def __init__(
        self,
        topics: List[Topic],
        pools: List[Pool],
        store: JudgmentStore,
        config: JudgeConfig,
        documents: Optional[Mapping[str, Document]] = None,
    ):
        self.topics = {t.topic_id: t for t in topics}
        self.pools = {p.topic_id: p for p in pools}
        missing = sorted(set(self.pools) - set(self.topics))
        if missing:
            raise ValueError(f"pools reference unknown topics: {missing}")
        self.store = store
        self.config = config
        self.documents = documents or {}

    # -- topics ---------------------------------------------------------

    def topic_listing(self, assessor: str) -> List[dict]:
        completed = set(self.store.completed_topics(assessor))
        rows = []
        for topic_id in sorted(self.pools):
            topic = self.topics[topic_id]
            rows.append(
                {
                    "topic_id": topic_id,
                    "title": topic.title,
                    "description": topic.description,
                    "narrative": topic.narrative,
                    "pool_size": len(self.pools[topic_id].docnos),
                    "completed": topic_id in completed,
                }
            )
        return rows

    def pool_payload(self, topic_id: int, assessor: str) -> dict:
        pool = self._pool(topic_id)
        topic = self.topics[topic_id]
        docs = []
        for docno in pool.docnos:
            doc = self.documents.get(docno)
            docs.append(
                {
                    "docno": docno,
                    "title": doc.title if doc else "",
                    "content": doc.content if doc else "",
                    "url": doc.url if doc else "",
                }
            )
        return {
            "topic_id": topic_id,
            "title": topic.title,
            "description": topic.description,
            "narrative": topic.narrative,
            "documents": docs,
            "locked": self.store.is_locked(assessor, topic_id),
        }

    def _pool(self, topic_id: int) -> Pool:
        if topic_id not in self.pools:
            raise KeyError(topic_id)
        return self.pools[topic_id]

    # -- judging ----------------------------------------------------------

    def submit(
        self,
        assessor: str,
        topic_id: int,
        grades: Mapping[str, int],
        idempotency_key: Optional[str] = None,
    ) -> dict:
        pool = self._pool(topic_id)
        return self.store.submit_judgments(
            assessor, topic_id, grades, pool.docnos, idempotency_key
        )

    # -- ties --------------------------------------------------------------

    def current_ties(self) -> List[dict]:
        _, ties, _ = aggregate(self.store.round1_records(), self.config.expected_votes)
        tie_votes = self.store.tie_votes()
        rows = []
        for tie in ties:
            votes = tie_votes.get((tie.topic_id, tie.docno), {})
            resolved = len(votes) >= SECOND_ROUND_VOTES
            row = {
                "pair": f"{tie.topic_id}:{tie.docno}",
                "topic_id": tie.topic_id,
                "docno": tie.docno,
                "options": list(tie.options),
                "round1_votes": list(tie.votes),
                "second_round_votes": len(votes),
                "resolved": resolved,
            }
            if resolved:
                grade, status = resolve_second_round(
                    tie.votes, list(votes.values()), tie.options
                )
                row["final_grade"] = grade
                row["status"] = status
            rows.append(row)
        return rows

    def resolve(self, assessor: str, pair: str, grade: int) -> dict:
        if assessor not in self.config.second_round_assessors:
            raise PermissionError(f"{assessor} is not a second-round assessor")
        topic_text, _, docno = pair.partition(":")
        try:
            topic_id = int(topic_text)
        except ValueError:
            raise KeyError(pair) from None
        tie = self._find_tie(topic_id, docno)
        votes = self.store.tie_votes().get((topic_id, docno), {})
        if len(votes) >= SECOND_ROUND_VOTES:
            raise ConflictError(f"tie {pair} already has {len(votes)} votes")
        ack = self.store.submit_tie_vote(assessor, topic_id, docno, grade, tie.options)
        return {"pair": pair, "votes": ack["votes"], "needed": SECOND_ROUND_VOTES}

    def _find_tie(self, topic_id: int, docno: str) -> TiedPair:
        _, ties, _ = aggregate(self.store.round1_records(), self.config.expected_votes)
        for tie in ties:
            if tie.topic_id == topic_id and tie.docno == docno:
                return tie
        raise KeyError(f"{topic_id}:{docno}")

    # -- agreement & export ---------------------------------------------

    def agreement(self) -> dict:
        report = agreement_report(self.store.judgments_by_assessor())
        matrix = {
            f"{a}|{b}": round(value, 6) for (a, b), value in sorted(report.pairwise.items())
        }
        return {
            "assessors": list(report.assessors),
            "pairwise": matrix,
            "average": round(report.average, 6),
        }

    def final_aggregation(self) -> List[AggregatedQrel]:
        aggregated, ties, incomplete = aggregate(
            self.store.round1_records(), self.config.expected_votes
        )
        tie_votes = self.store.tie_votes()
        unresolved = []
        for tie in ties:
            votes = tie_votes.get((tie.topic_id, tie.docno), {})
            if len(votes) < SECOND_ROUND_VOTES:
                unresolved.append(f"{tie.topic_id}:{tie.docno}")
                continue
            grade, status = resolve_second_round(
                tie.votes, list(votes.values()), tie.options
            )
            histogram = dict.fromkeys(range(4), 0)
            for vote in tie.votes:
                histogram[vote] += 1
            aggregated.append(
                AggregatedQrel(tie.topic_id, tie.docno, grade, status, histogram)
            )
        if unresolved:
            raise ConflictError(
                f"{len(unresolved)} tied pairs lack second-round votes: "
                + ", ".join(unresolved[:10])
            )
        if incomplete:
            raise ConflictError(
                f"{len(incomplete)} pairs have incomplete round-1 votes"
            )
        return sorted(aggregated, key=lambda e: (e.topic_id, e.docno))

    def export_payload(self) -> dict:
        aggregated = self.final_aggregation()
        qrels, report = export_qrels(aggregated)
        import io

        buf = io.StringIO()
        write_qrels(qrels, buf)
        return {
            "qrels_text": buf.getvalue(),
            "n_topics": report.n_topics,
            "n_qrels": report.n_qrels,
            "grade_histogram": {str(g): c for g, c in report.grade_histogram.items()},
            "excluded_topics": [
                {"topic_id": t, "relevant": r, "reason": reason}
                for t, r, reason in report.dropped_topics
            ],
        }


# ---------------------------------------------------------------------------
# FastAPI wiring
# ---------------------------------------------------------------------------

class JudgmentSubmission(BaseModel):
    grades: Dict[str, int]
    idempotency_key: Optional[str] = None


class TieResolution(BaseModel):
    grade: int


def create_app(service: JudgeService) -> FastAPI:
    app = FastAPI(title="relevance-judgment service")

    def authed(authorization: Optional[str] = Header(default=None)) -> str:
        if not authorization or not authorization.startswith("Bearer "):
            raise HTTPException(status_code=401, detail="missing bearer token")
        token = authorization.removeprefix("Bearer ").strip()
        assessor = service.config.tokens.get(token)
        if assessor is None:
            raise HTTPException(status_code=401, detail="unknown token")
        return assessor

    def versioned(payload: dict) -> dict:
        return {"schema_version": SCHEMA_VERSION, **payload}

    @app.get("/topics")
    def topics(assessor: str = Depends(authed)):
        return versioned({"assessor": assessor, "topics": service.topic_listing(assessor)})

    @app.get("/topics/{topic_id}/pool")
    def pool(topic_id: int, assessor: str = Depends(authed)):
        try:
            return versioned(service.pool_payload(topic_id, assessor))
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown topic {topic_id}")

    @app.post("/topics/{topic_id}/judgments")
    def judgments(
        topic_id: int, body: JudgmentSubmission, assessor: str = Depends(authed)
    ):
        try:
            ack = service.submit(assessor, topic_id, body.grades, body.idempotency_key)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown topic {topic_id}")
        except ConflictError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return versioned({"topic_id": topic_id, "locked": True, "accepted": ack["accepted"]})

    @app.get("/ties")
    def ties(offset: int = 0, limit: int = 1000, assessor: str = Depends(authed)):
        rows = service.current_ties()
        return versioned(
            {"count": len(rows), "offset": offset, "ties": rows[offset : offset + limit]}
        )

    @app.post("/ties/{pair}/resolution")
    def resolution(pair: str, body: TieResolution, assessor: str = Depends(authed)):
        try:
            ack = service.resolve(assessor, pair, body.grade)
        except PermissionError as exc:
            raise HTTPException(status_code=403, detail=str(exc))
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown tied pair {pair}")
        except ConflictError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return versioned(ack)

    @app.get("/agreement")
    def agreement(assessor: str = Depends(authed)):
        try:
            return versioned(service.agreement())
        except ValueError as exc:
            raise HTTPException(status_code=409, detail=str(exc))

    @app.get("/export/qrels")
    def export(assessor: str = Depends(authed)):
        try:
            return versioned(service.export_payload())
        except ConflictError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
    return app
