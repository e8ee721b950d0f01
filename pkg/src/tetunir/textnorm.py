"""Staged text preprocessing for queries and documents.

The pipeline applies, in this fixed order:

1. apostrophe-character unification (curly quotes, modifier letter
   apostrophe, backtick and acute accent all become U+0027),
2. lowercasing,
3. tokenization into maximal runs of letters/digits with internal
   apostrophes and hyphens retained (edge apostrophes/hyphens trimmed),
4. per-token toggles: hyphen splitting, apostrophe stripping, accent
   folding,
5. the token length filter,
6. stopword-variant correction followed by stopword removal (optional),
7. stemming (optional).

The same function is used for document fields and for queries, so a
query is always tokenized exactly like the documents it searches.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, fields
from typing import Callable, List

from . import stemmer as _stemmer

TokenStream = List[str]

# Characters unified into the ASCII apostrophe before tokenization, so a
# curly quote never splits a word like ne'ebé.
APOSTROPHE_VARIANTS = "‘’ʼ`´"
_APOSTROPHE_TRANS = str.maketrans({c: "'" for c in APOSTROPHE_VARIANTS})

_ACCENT_TRANS = str.maketrans("áéíóúñ", "aeioun")

# A token run: letters/digits plus embedded apostrophes and hyphens.
# Underscore is punctuation here, not a word character.
_RUN_RE = re.compile(r"(?:[^\W_]|['\-])+", re.UNICODE)

STEMMER_CHOICES = ("none",) + _stemmer.VARIANTS


@dataclass(frozen=True)
class NormConfig:
    """Preprocessing toggles for one indexing/retrieval configuration."""

    lowercase: bool = True
    strip_apostrophes: bool = False
    fold_accents: bool = False
    split_hyphens: bool = False
    remove_stopwords: bool = False
    stemmer: str = "none"
    max_token_len: int = 60

    def __post_init__(self):
        if not self.lowercase:
            raise ValueError("lowercasing is always on in this pipeline")
        if self.stemmer not in STEMMER_CHOICES:
            raise ValueError(f"stemmer must be one of {STEMMER_CHOICES}, got {self.stemmer!r}")
        if self.max_token_len < 1:
            raise ValueError("max_token_len must be >= 1")

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, data: dict) -> "NormConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown NormConfig keys: {sorted(unknown)}")
        return cls(**data)

    def to_file(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for key, value in self.to_dict().items():
                if isinstance(value, bool):
                    value = "true" if value else "false"
                fh.write(f"{key}={value}\n")

    @classmethod
    def from_file(cls, path) -> "NormConfig":
        data: dict = {}
        with open(path, encoding="utf-8") as fh:
            for raw in fh:
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ValueError(f"bad config line (want key=value): {line!r}")
                key, value = (part.strip() for part in line.split("=", 1))
                if key == "max_token_len":
                    data[key] = int(value)
                elif key == "stemmer":
                    data[key] = value
                elif value in ("true", "false"):
                    data[key] = value == "true"
                else:
                    raise ValueError(f"bad value for {key!r}: {value!r}")
        return cls.from_dict(data)

    def label(self) -> str:
        """Short deterministic tag, used in report headers and manifests."""
        parts = []
        if self.strip_apostrophes:
            parts.append("noapos")
        if self.fold_accents:
            parts.append("noacc")
        if self.split_hyphens:
            parts.append("nohyph")
        if self.remove_stopwords:
            parts.append("nostop")
        if self.stemmer != "none":
            parts.append(f"stem-{self.stemmer}")
        return "+".join(parts) if parts else "baseline"


def unify_apostrophes(text: str) -> str:
    return text.translate(_APOSTROPHE_TRANS)


def tokenize(text: str) -> TokenStream:
    """Split lowercase text into tokens; edge apostrophes/hyphens trimmed."""
    out = []
    for run in _RUN_RE.findall(text):
        token = run.strip("'-")
        if token:
            out.append(token)
    return out


def fold_accents(token: str) -> str:
    """Map á é í ó ú ñ to their unaccented letters; idempotent."""
    return token.translate(_ACCENT_TRANS)


def strip_apostrophes(token: str) -> str:
    return token.replace("'", "")


def split_hyphens(token: str) -> TokenStream:
    return [piece for piece in token.split("-") if piece]


def normalize(
    text: str,
    config: NormConfig | None = None,
    *,
    stopwords: "StopwordList | None" = None,
    stem_fn: Callable[[str], str] | None = None,
) -> TokenStream:
    """Run the full pipeline over ``text`` and return its tokens.

    ``stopwords`` defaults to the bundled Tetun list when stopword
    removal is enabled; ``stem_fn`` defaults to the bundled stemmer for
    ``config.stemmer``.  Deterministic: identical input and config give
    an identical token stream.
    """
    if config is None:
        config = NormConfig()

    tokens = tokenize(unify_apostrophes(text).lower())

    if config.split_hyphens:
        tokens = [piece for token in tokens for piece in split_hyphens(token)]
    if config.strip_apostrophes:
        tokens = [strip_apostrophes(token) for token in tokens]
    if config.fold_accents:
        tokens = [fold_accents(token) for token in tokens]

    tokens = [t for t in tokens if t and len(t) <= config.max_token_len]

    if config.remove_stopwords:
        if stopwords is None:
            from .stopwords import StopwordList

            stopwords = StopwordList.bundled()
        tokens = [t for t in tokens if stopwords.correct(t) not in stopwords]

    if config.stemmer != "none":
        if stem_fn is None:
            stem_fn = _stemmer.make_stemmer(config.stemmer)
        tokens = [stem_fn(t) for t in tokens]

    return tokens
