"""The three stemmer variants and their intrinsic evaluation.

The light variant strips Portuguese-derived suffixes under R1/R2/RV
region gating; moderate adds the native suffixes (n, -nain, -teen,
dór); heavy also removes the native prefixes (ha, nak, nam).  Quality
is measured with understemming/overstemming indices against concept
groups, and ERRT compares the stemmer against plain length truncation.
"""

from tetunir.stemeval import ConceptGroups, evaluate_stemmers, render_text
from tetunir.stemmer import compute_regions, stem

words = [
    "komunikasaun", "komunikadu", "komunikativa",   # one concept, three forms
    "akontesimentu", "selebrasaun", "estudante",
    "hemudór", "susun", "hateten",                  # native suffixes
    "hadame", "nakfera",                            # native prefixes
    "ba", "iha",                                    # too short to stem
]

print(f"{'word':<16}{'regions (R1,R2,RV)':<22}{'light':<14}{'moderate':<14}{'heavy':<14}")
for word in words:
    r = compute_regions(word)
    regions = f"({r.r1_start},{r.r2_start},{r.rv_start})"
    print(
        f"{word:<16}{regions:<22}"
        f"{stem(word, 'light'):<14}{stem(word, 'moderate'):<14}{stem(word, 'heavy'):<14}"
    )

# Intrinsic evaluation needs a ground truth of concept groups: every
# member of a group should conflate to one stem, and nothing else
# should join it.  kazu (case) and kaza (house) are unrelated but both
# strip to "kaz", a classic overstemming trap.
groups = ConceptGroups.parse("""
'komunik': ['komunikasaun', 'komunikadu', 'komunikativa', 'komunikadór']
'akontes': ['akontese', 'akontesimentu', 'akontesimentus']
'selebr':  ['selebrasaun', 'selebradu']
'estud':   ['estuda', 'estudante', 'estudantes']
'hemu':    ['hemu', 'hemudór']
'hatete':  ['hatete', 'hateten']
'kazu':    ['kazu', 'kazus']
'kaza':    ['kaza', 'kazas']
'otél':    ['otél']
""")

# truncation lengths must actually truncate; this sample's words are
# short, so the baseline uses 3/4/5 letters rather than the 7/8/9 used
# for a full-vocabulary ground truth
print("\nPaice indices per variant (truncation baseline at 3, 4, 5 letters):")
print(render_text(evaluate_stemmers(groups, truncation_lengths=(3, 4, 5))))
print("UI = missed merges inside groups; OI = wrong merges across groups;")
print("ERRT < 1 means better than length truncation along the same ray.")
