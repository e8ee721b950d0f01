"""Detect stopword candidates two ways and score them against the list.

Frequency methods (TF, IDF, TF-IDF) weight terms by how often and how
widely they occur; graph methods build a directed co-occurrence network
over adjacent tokens and rank by in-degree, out-degree, or their sum.
Precision-at-n against the curated 160-entry list shows how many of the
top candidates are genuine stopwords.
"""

from pathlib import Path

from tetunir.corpus import parse_documents
from tetunir.stopwords import StopwordDetector, StopwordList, precision_at
from tetunir.textnorm import NormConfig, normalize

fixtures = Path(__file__).parent.parent / "tests" / "fixtures"

config = NormConfig()
streams = []
for doc in parse_documents(fixtures / "docs.trec"):
    tokens = normalize(doc.title + "\n" + doc.content, config)
    # stopword detection works on words only; drop pure numbers
    streams.append([t for t in tokens if any(ch.isalpha() for ch in t)])

detector = StopwordDetector(streams)
truth = StopwordList.bundled()
print(f"corpus: {len(streams)} documents, vocabulary {len(detector.scores)} terms")
print(f"ground truth: {len(truth)} curated stopwords\n")

cutoffs = (5, 10, 25)
print(f"{'method':<12}" + "".join(f"P@{c:<6}" for c in cutoffs) + "top candidates")
for method in ("tf", "idf", "tfidf", "in_degree", "out_degree", "degree"):
    ranked = detector.rank(method, 25)
    table = precision_at(ranked, truth, cutoffs)
    row = f"{method:<12}" + "".join(f"{table[c]:<8.2f}" for c in cutoffs)
    print(row + ", ".join(ranked[:6]))

print("\nNote: a 20-document fixture is far too small for the published")
print("precision levels; run against a full crawl for meaningful rows.")

g = detector.graph
print("\nco-occurrence degrees for 'iha':",
      f"in={g.in_degree('iha')} out={g.out_degree('iha')} degree={g.degree('iha')}")
