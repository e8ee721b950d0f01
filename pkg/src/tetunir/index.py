"""Inverted index over one document field under a preprocessing config.

The index stores, per term, postings of (document id, term frequency),
plus per-document token lengths and corpus aggregates.  The persisted
form is a directory of deterministic bytes: a JSON manifest recording
the corpus hash and the preprocessing config, a document table, a
sorted dictionary, and a varint-encoded postings file.  Building twice
from the same corpus and config yields byte-identical output.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Tuple

from .corpus import Document
from .textnorm import NormConfig, normalize

INDEX_SCHEMA_VERSION = 1

INDEXABLE_FIELDS = ("title", "content")


class IndexBuildError(ValueError):
    pass


@dataclass(frozen=True)
class CollectionStats:
    """Corpus aggregates feeding the ranking formulas."""

    n_docs: int
    total_tokens: int
    vocab_size: int

    @property
    def avdl(self) -> float:
        return self.total_tokens / self.n_docs if self.n_docs else 0.0


class InvertedIndex:
    def __init__(
        self,
        field: str,
        config: NormConfig,
        docnos: List[str],
        doc_lengths: List[int],
        postings: Dict[str, List[Tuple[int, int]]],
        corpus_sha256: str,
    ):
        self.field = field
        self.config = config
        self.docnos = docnos
        self.doc_lengths = doc_lengths
        self.postings = postings
        self.corpus_sha256 = corpus_sha256
        self._docno_to_id = {docno: i for i, docno in enumerate(docnos)}

    # -- statistics ---------------------------------------------------

    @property
    def n_docs(self) -> int:
        return len(self.docnos)

    @property
    def total_tokens(self) -> int:
        return sum(self.doc_lengths)

    @property
    def vocab_size(self) -> int:
        return len(self.postings)

    def stats(self) -> CollectionStats:
        return CollectionStats(self.n_docs, self.total_tokens, self.vocab_size)

    def df(self, term: str) -> int:
        return len(self.postings.get(term, ()))

    def cf(self, term: str) -> int:
        return sum(tf for _, tf in self.postings.get(term, ()))

    def postings_for(self, term: str) -> List[Tuple[int, int]]:
        return self.postings.get(term, [])

    def doc_length(self, doc_id: int) -> int:
        return self.doc_lengths[doc_id]

    def docno(self, doc_id: int) -> str:
        return self.docnos[doc_id]

    def doc_id(self, docno: str) -> int:
        return self._docno_to_id[docno]

    # -- construction -------------------------------------------------

    @classmethod
    def build(
        cls,
        documents: Iterable[Document],
        field: str,
        config: NormConfig,
        **normalize_kwargs,
    ) -> "InvertedIndex":
        """Index ``normalize(doc.<field>, config)`` for every document."""
        if field not in INDEXABLE_FIELDS:
            raise IndexBuildError(f"field must be one of {INDEXABLE_FIELDS}, got {field!r}")
        docnos: List[str] = []
        doc_lengths: List[int] = []
        postings: Dict[str, List[Tuple[int, int]]] = {}
        hasher = hashlib.sha256(f"field={field}\n".encode("utf-8"))
        seen: set = set()

        for doc_id, doc in enumerate(documents):
            if doc.docno in seen:
                raise IndexBuildError(f"duplicate docno {doc.docno!r}")
            seen.add(doc.docno)
            text = doc.field(field)
            hasher.update(doc.docno.encode("utf-8") + b"\x00")
            hasher.update(text.encode("utf-8") + b"\x00")
            tokens = normalize(text, config, **normalize_kwargs)
            docnos.append(doc.docno)
            doc_lengths.append(len(tokens))
            counts: Dict[str, int] = {}
            for token in tokens:
                counts[token] = counts.get(token, 0) + 1
            for term, tf in counts.items():
                postings.setdefault(term, []).append((doc_id, tf))

        return cls(field, config, docnos, doc_lengths, postings, hasher.hexdigest())

    # -- persistence --------------------------------------------------

    def manifest(self) -> dict:
        return {
            "schema_version": INDEX_SCHEMA_VERSION,
            "field": self.field,
            "config": self.config.to_dict(),
            "corpus_sha256": self.corpus_sha256,
            "n_docs": self.n_docs,
            "total_tokens": self.total_tokens,
            "vocab_size": self.vocab_size,
        }

    def save(self, directory) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        (directory / "manifest.json").write_bytes(
            json.dumps(self.manifest(), sort_keys=True, indent=2, ensure_ascii=False).encode("utf-8")
            + b"\n"
        )
        (directory / "docs.tsv").write_bytes(
            "".join(
                f"{docno}\t{length}\n"
                for docno, length in zip(self.docnos, self.doc_lengths)
            ).encode("utf-8")
        )
        dict_buf = bytearray()
        post_buf = bytearray()
        for term in sorted(self.postings):
            plist = self.postings[term]
            block = bytearray()
            prev = -1
            for doc_id, tf in plist:
                block += _varint(doc_id - prev)
                block += _varint(tf)
                prev = doc_id
            term_bytes = term.encode("utf-8")
            dict_buf += _varint(len(term_bytes))
            dict_buf += term_bytes
            dict_buf += _varint(len(plist))
            dict_buf += _varint(sum(tf for _, tf in plist))
            dict_buf += _varint(len(block))
            post_buf += block
        (directory / "dict.bin").write_bytes(bytes(dict_buf))
        (directory / "postings.bin").write_bytes(bytes(post_buf))

    @classmethod
    def load(cls, directory) -> "InvertedIndex":
        directory = Path(directory)
        manifest = json.loads((directory / "manifest.json").read_text(encoding="utf-8"))
        if manifest["schema_version"] != INDEX_SCHEMA_VERSION:
            raise IndexBuildError(
                f"index schema {manifest['schema_version']} unsupported "
                f"(expected {INDEX_SCHEMA_VERSION})"
            )
        config = NormConfig.from_dict(manifest["config"])
        docnos: List[str] = []
        doc_lengths: List[int] = []
        for line in (directory / "docs.tsv").read_text(encoding="utf-8").splitlines():
            docno, length = line.split("\t")
            docnos.append(docno)
            doc_lengths.append(int(length))

        dict_data = (directory / "dict.bin").read_bytes()
        post_data = (directory / "postings.bin").read_bytes()
        postings: Dict[str, List[Tuple[int, int]]] = {}
        dpos = 0
        ppos = 0
        while dpos < len(dict_data):
            term_len, dpos = _read_varint(dict_data, dpos)
            term = dict_data[dpos : dpos + term_len].decode("utf-8")
            dpos += term_len
            df, dpos = _read_varint(dict_data, dpos)
            _cf, dpos = _read_varint(dict_data, dpos)
            block_len, dpos = _read_varint(dict_data, dpos)
            block_end = ppos + block_len
            plist: List[Tuple[int, int]] = []
            prev = -1
            while ppos < block_end:
                gap, ppos = _read_varint(post_data, ppos)
                tf, ppos = _read_varint(post_data, ppos)
                doc_id = prev + gap
                plist.append((doc_id, tf))
                prev = doc_id
            if len(plist) != df:
                raise IndexBuildError(f"postings length mismatch for term {term!r}")
            postings[term] = plist

        index = cls(
            manifest["field"],
            config,
            docnos,
            doc_lengths,
            postings,
            manifest["corpus_sha256"],
        )
        if index.total_tokens != manifest["total_tokens"]:
            raise IndexBuildError("token count mismatch between manifest and doc table")
        return index


def _varint(value: int) -> bytes:
    if value < 0:
        raise ValueError("varints are unsigned")
    out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def _read_varint(data: bytes, pos: int) -> Tuple[int, int]:
    shift = 0
    result = 0
    while True:
        byte = data[pos]
        pos += 1
        result |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return result, pos
        shift += 7


def icf(baseline_terms: int, variant_terms: int) -> float:
    """Index compression factor: percent reduction in distinct terms."""
    if baseline_terms < 1:
        raise ValueError("baseline term count must be >= 1")
    return round(100.0 * (baseline_terms - variant_terms) / baseline_terms, 2)
