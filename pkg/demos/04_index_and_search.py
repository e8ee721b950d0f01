"""Build inverted indexes, compare their sizes, and rank with five models.

Indexing the same field under different preprocessing configs changes
the number of distinct terms; the index compression factor (ICF) is the
percent reduction against the baseline config.  Retrieval then scores
candidates with BM25, its divergence-from-randomness variant, TF-IDF,
and two language models.
"""

from pathlib import Path

from tetunir.corpus import parse_documents
from tetunir.index import InvertedIndex, icf
from tetunir.rank import MODEL_CHOICES, RankParams, search
from tetunir.textnorm import NormConfig

fixtures = Path(__file__).parent.parent / "tests" / "fixtures"


def build(config):
    return InvertedIndex.build(parse_documents(fixtures / "docs.trec"), "title", config)


baseline = build(NormConfig())
print(f"baseline title index: {baseline.vocab_size} distinct terms, "
      f"{baseline.total_tokens} tokens, avdl={baseline.stats().avdl:.2f}")

print("\nindex compression vs baseline:")
for config in (
    NormConfig(strip_apostrophes=True),
    NormConfig(fold_accents=True),
    NormConfig(split_hyphens=True),
    NormConfig(remove_stopwords=True),
    NormConfig(stemmer="light"),
    NormConfig(stemmer="heavy"),
):
    variant = build(config)
    print(f"  {config.label():<16} {variant.vocab_size:>4} terms  "
          f"icf={icf(baseline.vocab_size, variant.vocab_size):6.2f}%")

query = "eleisaun prezidensiál"
print(f"\nquery: {query!r}  (query text is normalized with the index's own config)")
for model in MODEL_CHOICES:
    ranked = search(baseline, query, RankParams(model=model), k=3)
    row = ", ".join(f"{d}:{s:.3f}" for d, s in ranked.entries)
    print(f"  {model:<14} {row}")

print("\nReranking with the persisted form is identical: save() emits")
print("deterministic bytes and load() restores the exact same index.")
