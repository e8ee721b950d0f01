"""Three-variant suffix-stripping stemmer for Tetun.

Tetun mixes native vocabulary with a large share of Portuguese loanwords,
so stemming is split into three variants:

* ``light``    -- strips Portuguese-derived suffixes only, gated by the
  R1/R2/RV character regions of the word.
* ``moderate`` -- additionally strips the native suffixes
  (``n``, ``-nain``, ``-teen``, ``dór``) when nothing else matched.
* ``heavy``    -- additionally strips one leading native prefix
  (``ha``, ``nak``, ``nam``).

Suffix classes live in ``data/suffixes_tet.txt`` so they can be amended
without touching code.  All functions are pure and safe to call from any
number of threads once the table is loaded.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable

VOWELS = frozenset("aeiouáéíóú")

VARIANTS = ("light", "moderate", "heavy")

# Native-affix removal is unconditional on regions, so remainder-length
# guards bound the damage on short words (stripping "n" from a 3-letter
# word, or "ha" down to a single letter, is never useful).
MIN_SUFFIX_REMAINDER = 3
MIN_PREFIX_REMAINDER = 2


@dataclass(frozen=True)
class StemRegions:
    """Character offsets of the R1/R2/RV regions of a word.

    An offset equal to the word length denotes the null region at the
    end of the word.
    """

    r1_start: int
    r2_start: int
    rv_start: int


def compute_regions(word: str) -> StemRegions:
    """Compute R1, R2 and RV offsets for a lowercase word.

    R1 starts after the first non-vowel that follows a vowel; R2 applies
    the same rule inside R1.  RV depends on the shape of the first two
    letters: consonant second letter -> after the next vowel; two leading
    vowels -> after the next consonant; consonant+vowel -> after the
    third letter.  Accented vowels count as vowels.
    """
    if not word:
        raise ValueError("cannot compute regions of an empty word")
    n = len(word)

    r1 = n
    for i in range(1, n):
        if word[i] not in VOWELS and word[i - 1] in VOWELS:
            r1 = i + 1
            break

    r2 = n
    for i in range(r1 + 1, n):
        if word[i] not in VOWELS and word[i - 1] in VOWELS:
            r2 = i + 1
            break

    rv = n
    if n >= 2:
        if word[1] not in VOWELS:
            for i in range(2, n):
                if word[i] in VOWELS:
                    rv = i + 1
                    break
        elif word[0] in VOWELS:
            for i in range(2, n):
                if word[i] not in VOWELS:
                    rv = i + 1
                    break
        else:
            rv = min(3, n)

    return StemRegions(r1, r2, rv)


def _sorted_suffixes(entries: Iterable[str]) -> tuple[str, ...]:
    # Longest first so "ends with any" always means the longest match.
    return tuple(sorted(set(entries), key=lambda s: (-len(s), s)))


@dataclass(frozen=True)
class SuffixTable:
    """Suffix classes and native affixes driving the stemmer."""

    general_suf: tuple[str, ...]
    lojia_suf: tuple[str, ...]
    usaun_suf: tuple[str, ...]
    ensia_suf: tuple[str, ...]
    amente_suf: tuple[str, ...]
    iv_suf: tuple[str, ...]
    at_suf: tuple[str, ...]
    ozikad_suf: tuple[str, ...]
    mente_suf: tuple[str, ...]
    ante_suf: tuple[str, ...]
    idade_suf: tuple[str, ...]
    abil_suf: tuple[str, ...]
    iva_suf: tuple[str, ...]
    verb_suf: tuple[str, ...]
    residual_suf: tuple[str, ...]
    native_prefixes: tuple[str, ...]
    native_suffixes: tuple[str, ...]

    _SECTIONS = {
        "general": "general_suf",
        "lojia": "lojia_suf",
        "usaun": "usaun_suf",
        "ensia": "ensia_suf",
        "amente": "amente_suf",
        "iv": "iv_suf",
        "at": "at_suf",
        "ozikad": "ozikad_suf",
        "mente": "mente_suf",
        "ante": "ante_suf",
        "idade": "idade_suf",
        "abil": "abil_suf",
        "iva": "iva_suf",
        "verb": "verb_suf",
        "residual": "residual_suf",
        "native_prefix": "native_prefixes",
        "native_suffix": "native_suffixes",
    }

    @classmethod
    def from_text(cls, text: str) -> "SuffixTable":
        sections: dict[str, list[str]] = {}
        current: list[str] | None = None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("[") and line.endswith("]"):
                name = line[1:-1].strip()
                if name not in cls._SECTIONS:
                    raise ValueError(f"unknown suffix section {name!r} at line {lineno}")
                current = sections.setdefault(name, [])
            elif current is None:
                raise ValueError(f"suffix entry before any section at line {lineno}")
            else:
                current.append(line)
        missing = sorted(set(cls._SECTIONS) - set(sections))
        if missing:
            raise ValueError(f"suffix table missing sections: {', '.join(missing)}")
        fields = {
            cls._SECTIONS[name]: _sorted_suffixes(entries)
            for name, entries in sections.items()
        }
        return cls(**fields)

    @classmethod
    def load(cls, path) -> "SuffixTable":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    @classmethod
    def bundled(cls) -> "SuffixTable":
        return _bundled_table()


@lru_cache(maxsize=1)
def _bundled_table() -> SuffixTable:
    text = (
        importlib.resources.files("tetunir.data")
        .joinpath("suffixes_tet.txt")
        .read_text(encoding="utf-8")
    )
    return SuffixTable.from_text(text)


def _longest_suffix(word: str, suffixes: tuple[str, ...]) -> str | None:
    for s in suffixes:
        if word.endswith(s):
            return s
    return None


def _longest_prefix(word: str, prefixes: tuple[str, ...]) -> str | None:
    best = None
    for p in prefixes:
        if word.startswith(p) and (best is None or len(p) > len(best)):
            best = p
    return best


def _strip_standard(word: str, t: SuffixTable, rg: StemRegions) -> tuple[bool, str]:
    """Run the standard/verb/residual suffix chain on ``word``.

    Returns ``(handled, result)``.  ``handled`` is True as soon as one
    arm's ends-with test matches, whether or not it removed anything:
    a match whose region test fails yields the original word and the
    chain does not fall through to later arms.
    """
    n = len(word)

    def in_region(suffix_start: int, region_start: int) -> bool:
        return suffix_start >= region_start

    s = _longest_suffix(word, t.general_suf)
    if s is not None:
        if in_region(n - len(s), rg.r2_start):
            return True, word[: n - len(s)]
        return True, word

    s = _longest_suffix(word, t.lojia_suf)
    if s is not None:
        if in_region(n - len(s), rg.r2_start):
            return True, word[: n - len(s)] + "loj"
        return True, word

    s = _longest_suffix(word, t.usaun_suf)
    if s is not None:
        if in_region(n - len(s), rg.r2_start):
            return True, word[: n - len(s)] + "u"
        return True, word

    s = _longest_suffix(word, t.ensia_suf)
    if s is not None:
        if in_region(n - len(s), rg.r2_start):
            return True, word[: n - len(s)] + "ente"
        return True, word

    s = _longest_suffix(word, t.amente_suf)
    if s is not None:
        if in_region(n - len(s), rg.r1_start):
            stem = word[: n - len(s)]
            iv = _longest_suffix(stem, t.iv_suf)
            if iv is not None and in_region(len(stem) - len(iv), rg.r2_start):
                stem = stem[: len(stem) - len(iv)]
                at = _longest_suffix(stem, t.at_suf)
                if at is not None and in_region(len(stem) - len(at), rg.r2_start):
                    stem = stem[: len(stem) - len(at)]
                return True, stem
            oid = _longest_suffix(stem, t.ozikad_suf)
            if oid is not None and in_region(len(stem) - len(oid), rg.r2_start):
                return True, stem[: len(stem) - len(oid)]
            return True, stem
        return True, word

    s = _longest_suffix(word, t.mente_suf)
    if s is not None:
        if in_region(n - len(s), rg.r2_start):
            stem = word[: n - len(s)]
            ant = _longest_suffix(stem, t.ante_suf)
            if ant is not None and in_region(len(stem) - len(ant), rg.r2_start):
                return True, stem[: len(stem) - len(ant)]
            return True, stem
        return True, word

    s = _longest_suffix(word, t.idade_suf)
    if s is not None:
        if in_region(n - len(s), rg.r2_start):
            stem = word[: n - len(s)]
            abl = _longest_suffix(stem, t.abil_suf)
            if abl is not None and in_region(len(stem) - len(abl), rg.r2_start):
                return True, stem[: len(stem) - len(abl)]
            return True, stem
        return True, word

    s = _longest_suffix(word, t.iva_suf)
    if s is not None:
        if in_region(n - len(s), rg.r2_start):
            stem = word[: n - len(s)]
            at = _longest_suffix(stem, t.at_suf)
            if at is not None and in_region(len(stem) - len(at), rg.r2_start):
                return True, stem[: len(stem) - len(at)]
            return True, stem
        return True, word

    s = _longest_suffix(word, t.verb_suf)
    if s is not None:
        if in_region(n - len(s), rg.rv_start):
            return True, word[: n - len(s)]
        return True, word

    s = _longest_suffix(word, t.residual_suf)
    if s is not None:
        if in_region(n - len(s), rg.rv_start):
            return True, word[: n - len(s)]
        return True, word

    return False, word


def stem(word: str, variant: str = "light", table: SuffixTable | None = None) -> str:
    """Stem a lowercase, apostrophe-normalized word.

    Words shorter than four characters are returned unchanged.  At most
    one removal pathway fires per call.  The heavy variant checks native
    prefixes up front: when a word carries one, the de-prefixed form is
    returned without further suffix stripping, which keeps prefix
    removal from compounding with the residual-suffix arm.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown stemmer variant {variant!r}")
    if len(word) < 4:
        return word
    t = table if table is not None else _bundled_table()

    if variant == "heavy":
        p = _longest_prefix(word, t.native_prefixes)
        if p is not None and len(word) - len(p) >= MIN_PREFIX_REMAINDER:
            return word[len(p):]

    handled, out = _strip_standard(word, t, compute_regions(word))
    if handled:
        return out

    if variant in ("moderate", "heavy"):
        s = _longest_suffix(word, t.native_suffixes)
        if s is not None and len(word) - len(s) >= MIN_SUFFIX_REMAINDER:
            return word[: len(word) - len(s)]

    return word


def make_stemmer(variant: str, table: SuffixTable | None = None) -> Callable[[str], str]:
    """Return a ``word -> stem`` callable for the given variant."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown stemmer variant {variant!r}")
    t = table if table is not None else _bundled_table()
    return lambda word: stem(word, variant, t)
