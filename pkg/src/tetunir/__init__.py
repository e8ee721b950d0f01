"""Ad-hoc text retrieval workbench for Tetun.

Submodules:

* ``textnorm``  -- staged preprocessing (apostrophes, accents, hyphens,
  stopwords, stemming) shared by documents and queries
* ``stopwords`` -- stopword detection by term weighting and
  co-occurrence graphs, plus the bundled 160-entry Tetun list
* ``stemmer``   -- the three-variant Tetun suffix stripper
* ``stemeval``  -- intrinsic stemmer evaluation (understemming /
  overstemming indices, truncation baseline, error rate vs truncation)
* ``corpus``    -- TREC-style documents, topics, qrels, and run files
* ``index``     -- inverted indexing and index-compression reporting
* ``rank``      -- five scoring models and top-k retrieval
* ``ireval``    -- graded-relevance evaluation (P@k, MAP, NDCG)
* ``pool``      -- balanced-interleaving document pooling
* ``judge``     -- relevance-assessment service with majority voting,
  tie resolution, and inter-annotator agreement
* ``cli``       -- command-line surface, including the ablation grid
"""

__version__ = "0.1.0"
