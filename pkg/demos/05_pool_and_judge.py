"""Pool documents for assessment, simulate five assessors, export qrels.

Pools merge BM25 and Dirichlet-LM rankings by balanced interleaving.
Five simulated assessors then grade every pooled document (0..3); a
grade exceeding half the votes wins, other pairs tie and go to a
three-assessor second round restricted to the two tied options.  The
final collection drops topics with too few (or implausibly many)
relevant documents.
"""

import random
import tempfile
from pathlib import Path

from tetunir.corpus import parse_documents, parse_topics
from tetunir.index import InvertedIndex
from tetunir.judge import (
    JudgmentStore,
    agreement_report,
    aggregate,
    export_qrels,
    resolve_second_round,
)
from tetunir.judge import AggregatedQrel
from tetunir.pool import build_pools
from tetunir.textnorm import NormConfig

fixtures = Path(__file__).parent.parent / "tests" / "fixtures"

index = InvertedIndex.build(parse_documents(fixtures / "docs.trec"), "content", NormConfig())
topics = parse_topics(fixtures / "topics.trec")
pools = build_pools(topics, index, depth=12)
for pool in pools:
    print(f"topic {pool.topic_id}: pool of {len(pool.docnos)} docs, "
          f"first 4 = {pool.docnos[:4]}")
    first = pool.docnos[0]
    print(f"  provenance of {first}: {pool.provenance[first]}")

# Simulate five assessors with noisy but correlated opinions.
rng = random.Random(160)
assessors = [f"a{i}" for i in range(5)]
state_dir = Path(tempfile.mkdtemp(prefix="judge-demo-"))
store = JudgmentStore(state_dir)
for pool in pools:
    true_grade = {d: rng.choice((0, 0, 1, 2, 3)) for d in pool.docnos}
    for assessor in assessors:
        grades = {
            d: max(0, min(3, g + rng.choice((-1, 0, 0, 0, 1))))
            for d, g in true_grade.items()
        }
        store.submit_judgments(assessor, pool.topic_id, grades, pool.docnos)

aggregated, ties, incomplete = aggregate(store.round1_records(), m=5)
print(f"\nround 1: {len(aggregated)} majorities, {len(ties)} ties, "
      f"{len(incomplete)} incomplete")

# Second round: three assessors choose between the two tied options.
for tie in ties:
    for assessor in assessors[:3]:
        vote = rng.choice(tie.options)
        store.submit_tie_vote(assessor, tie.topic_id, tie.docno, vote, tie.options)
    votes = list(store.tie_votes()[(tie.topic_id, tie.docno)].values())
    grade, status = resolve_second_round(tie.votes, votes, tie.options)
    print(f"  tie {tie.topic_id}:{tie.docno} options={tie.options} -> {grade} ({status})")
    aggregated.append(AggregatedQrel(tie.topic_id, tie.docno, grade, status, {}))

report = agreement_report(store.judgments_by_assessor())
print(f"\npairwise Cohen's kappa over {len(report.pairwise)} assessor pairs, "
      f"average = {report.average:.4f}")

qrels, exclusions = export_qrels(aggregated, min_relevant=5)
print(f"\nexport: {exclusions.n_topics} topics kept, {exclusions.n_qrels} qrels, "
      f"grade histogram {dict(exclusions.grade_histogram)}")
for topic_id, relevant, reason in exclusions.dropped_topics:
    print(f"  dropped topic {topic_id}: {reason}")
print(f"\njournal on disk: {store.journal_path} (replay reconstructs everything)")
