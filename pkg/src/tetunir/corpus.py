"""TREC-style test-collection artifacts: documents, topics, qrels, runs.

Documents and topics are SGML-tagged records; qrels and runs are plain
whitespace-separated columns.  Parsers stream (constant memory per
record), treat tag names case-insensitively, require valid UTF-8, and
accept gzip-compressed files by ``.gz`` extension.  Writers emit
deterministic, byte-stable output so ``parse . write`` is the identity
on canonical forms.

Field text must not itself contain record or field tags; the format has
no escaping, matching TREC practice.
"""

from __future__ import annotations

import gzip
import io
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple, Union

DEFAULT_MAX_RECORD_BYTES = 64 * 1024 * 1024

GRADE_LEVELS = (0, 1, 2, 3)  # irrelevant .. highly relevant


class ParseError(ValueError):
    """Malformed input; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(ValueError):
    pass


@dataclass(frozen=True)
class Document:
    docno: str
    title: str = ""
    url: str = ""
    source: str = ""
    date: str = ""
    content: str = ""

    def __post_init__(self):
        if not self.docno:
            raise ValidationError("document docno must be non-empty")

    def field(self, name: str) -> str:
        if name not in ("title", "content"):
            raise ValueError(f"indexable fields are 'title' and 'content', got {name!r}")
        return getattr(self, name)


@dataclass(frozen=True)
class Topic:
    topic_id: int
    title: str
    description: str = ""
    narrative: str = ""

    def __post_init__(self):
        if self.topic_id < 1:
            raise ValidationError(f"topic_id must be >= 1, got {self.topic_id}")
        if not self.title:
            raise ValidationError(f"topic {self.topic_id} has an empty title")


@dataclass(frozen=True)
class Qrel:
    topic_id: int
    docno: str
    grade: int

    def __post_init__(self):
        if self.grade not in GRADE_LEVELS:
            raise ValidationError(
                f"grade must be one of {GRADE_LEVELS}, got {self.grade} "
                f"for topic {self.topic_id} doc {self.docno}"
            )


@dataclass(frozen=True)
class RunEntry:
    topic_id: int
    docno: str
    rank: int
    score: float
    run_tag: str

    def __post_init__(self):
        if self.rank < 1:
            raise ValidationError(f"rank must be >= 1, got {self.rank}")


Source = Union[str, Path, io.IOBase]


def open_maybe_gzip(path: Union[str, Path], mode: str = "rb"):
    """Open ``path``, transparently decompressing ``.gz`` files."""
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, mode)
    return open(path, mode)


def _iter_lines(source: Source) -> Iterator[Tuple[int, str, int]]:
    """Yield (lineno, decoded line, byte length); invalid UTF-8 is fatal."""

    def decode(lineno: int, raw: bytes) -> str:
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"invalid UTF-8 byte sequence ({exc.reason})", lineno) from None

    if isinstance(source, (str, Path)):
        with open_maybe_gzip(source, "rb") as fh:
            for lineno, raw in enumerate(fh, start=1):
                yield lineno, decode(lineno, raw), len(raw)
        return

    for lineno, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            yield lineno, decode(lineno, raw), len(raw)
        else:
            yield lineno, raw, len(raw.encode("utf-8"))


_DOC_OPEN = re.compile(r"<DOC>", re.IGNORECASE)
_DOC_CLOSE = re.compile(r"</DOC>", re.IGNORECASE)
_DOC_FIELDS = ("docno", "title", "url", "source", "date", "content")


def _extract_tag(block: str, tag: str) -> str | None:
    m = re.search(rf"<{tag}>(.*?)</{tag}>", block, re.IGNORECASE | re.DOTALL)
    return m.group(1).strip() if m else None


def parse_documents(
    source: Source, max_record_bytes: int = DEFAULT_MAX_RECORD_BYTES
) -> Iterator[Document]:
    """Stream ``<DOC>`` records from TREC-formatted text.

    Unknown tags inside a record are ignored; a record missing its
    DOCNO, an unterminated record, or a record above the byte cap is a
    ParseError carrying the line number.  Document order is preserved
    and docnos must be unique.
    """
    seen_docnos: set = set()
    buf: List[str] = []
    buf_bytes = 0
    open_line: int | None = None

    for lineno, line, nbytes in _iter_lines(source):
        if open_line is None:
            opened = _DOC_OPEN.search(line)
            if not opened:
                continue
            open_line = lineno
            buf = [line]
            buf_bytes = nbytes
            close_from = opened.end()
        else:
            buf.append(line)
            buf_bytes += nbytes
            close_from = 0
        if buf_bytes > max_record_bytes:
            context = _extract_tag("".join(buf[:50]), "docno") or "<unknown docno>"
            raise ParseError(
                f"record starting at line {open_line} ({context}) exceeds "
                f"{max_record_bytes} bytes without </DOC>",
                lineno,
            )
        if _DOC_CLOSE.search(line, close_from):
            yield _finish_document("".join(buf), open_line, seen_docnos)
            open_line = None
            buf = []
            buf_bytes = 0

    if open_line is not None:
        context = _extract_tag("".join(buf[:50]), "docno") or "<unknown docno>"
        raise ParseError(f"unterminated <DOC> record ({context})", open_line)


def _finish_document(block: str, open_line: int, seen: set) -> Document:
    docno = _extract_tag(block, "docno")
    if not docno:
        raise ParseError("record has no <DOCNO>", open_line)
    if docno in seen:
        raise ParseError(f"duplicate docno {docno!r}", open_line)
    seen.add(docno)
    fields = {name: _extract_tag(block, name) or "" for name in _DOC_FIELDS[1:]}
    return Document(docno=docno, **fields)


def write_documents(documents: Iterable[Document], sink) -> None:
    _write_text(sink, _render_documents(documents))


def _render_documents(documents: Iterable[Document]) -> str:
    parts = []
    for doc in documents:
        parts.append(
            "<DOC>\n"
            f"<DOCNO>{doc.docno}</DOCNO>\n"
            f"<TITLE>{doc.title}</TITLE>\n"
            f"<URL>{doc.url}</URL>\n"
            f"<SOURCE>{doc.source}</SOURCE>\n"
            f"<DATE>{doc.date}</DATE>\n"
            f"<CONTENT>{doc.content}</CONTENT>\n"
            "</DOC>\n"
        )
    return "".join(parts)


_TOP_OPEN = re.compile(r"<top>", re.IGNORECASE)
_TOP_CLOSE = re.compile(r"</top>", re.IGNORECASE)
_TOPIC_TAGS = ("num", "title", "desc", "narr")
_TOPIC_LABELS = re.compile(
    r"^(?:number|topic|description|narrative)\s*:\s*", re.IGNORECASE
)


def _extract_topic_tag(block: str, tag: str) -> str | None:
    value = _extract_tag(block, tag)
    if value is None:
        # classic open-tag style: value runs until the next tag
        m = re.search(
            rf"<{tag}>\s*(.*?)\s*(?=<(?:num|title|desc|narr)>|</top>|\Z)",
            block,
            re.IGNORECASE | re.DOTALL,
        )
        value = m.group(1).strip() if m else None
    if value is None:
        return None
    return _TOPIC_LABELS.sub("", value).strip()


def parse_topics(
    source: Source, max_record_bytes: int = DEFAULT_MAX_RECORD_BYTES
) -> List[Topic]:
    """Parse ``<top>`` blocks; both closed-tag and classic open-tag styles."""
    topics: List[Topic] = []
    seen_ids: set = set()
    buf: List[str] = []
    buf_bytes = 0
    open_line: int | None = None

    for lineno, line, nbytes in _iter_lines(source):
        if open_line is None:
            opened = _TOP_OPEN.search(line)
            if not opened:
                continue
            open_line = lineno
            buf = [line]
            buf_bytes = nbytes
            close_from = opened.end()
        else:
            buf.append(line)
            buf_bytes += nbytes
            close_from = 0
        if buf_bytes > max_record_bytes:
            raise ParseError(
                f"topic starting at line {open_line} exceeds {max_record_bytes} bytes",
                lineno,
            )
        if _TOP_CLOSE.search(line, close_from):
            topics.append(_finish_topic("".join(buf), open_line, seen_ids))
            open_line = None
            buf = []
            buf_bytes = 0

    if open_line is not None:
        raise ParseError("unterminated <top> record", open_line)
    return topics


def _finish_topic(block: str, open_line: int, seen_ids: set) -> Topic:
    num_text = _extract_topic_tag(block, "num")
    if num_text is None:
        raise ParseError("topic has no <num>", open_line)
    m = re.search(r"\d+", num_text)
    if m is None:
        raise ParseError(f"topic <num> has no integer: {num_text!r}", open_line)
    topic_id = int(m.group())
    if topic_id in seen_ids:
        raise ParseError(f"duplicate topic id {topic_id}", open_line)
    seen_ids.add(topic_id)
    title = _extract_topic_tag(block, "title")
    if not title:
        raise ParseError(f"topic {topic_id} has no <title>", open_line)
    return Topic(
        topic_id=topic_id,
        title=title,
        description=_extract_topic_tag(block, "desc") or "",
        narrative=_extract_topic_tag(block, "narr") or "",
    )


def write_topics(topics: Iterable[Topic], sink) -> None:
    parts = []
    for topic in topics:
        parts.append(
            "<top>\n"
            f"<num>{topic.topic_id}</num>\n"
            f"<title>{topic.title}</title>\n"
            f"<desc>{topic.description}</desc>\n"
            f"<narr>{topic.narrative}</narr>\n"
            "</top>\n"
        )
    _write_text(sink, "".join(parts))


def parse_qrels(source: Source) -> List[Qrel]:
    """Parse 4-column qrel lines ``topic_id 0 docno grade``."""
    qrels: List[Qrel] = []
    seen: set = set()
    for lineno, line, _ in _iter_lines(source):
        line = line.strip()
        if not line:
            continue
        cols = line.split()
        if len(cols) != 4:
            raise ParseError(f"expected 4 columns, got {len(cols)}: {line!r}", lineno)
        try:
            topic_id = int(cols[0])
            grade = int(cols[3])
        except ValueError:
            raise ParseError(f"non-integer topic or grade: {line!r}", lineno) from None
        if grade not in GRADE_LEVELS:
            raise ParseError(f"grade {grade} outside {GRADE_LEVELS}", lineno)
        key = (topic_id, cols[2])
        if key in seen:
            raise ParseError(f"duplicate (topic, docno) pair {key}", lineno)
        seen.add(key)
        qrels.append(Qrel(topic_id, cols[2], grade))
    return qrels


def write_qrels(qrels: Iterable[Qrel], sink) -> None:
    ordered = sorted(qrels, key=lambda q: (q.topic_id, q.docno))
    seen: set = set()
    for q in ordered:
        key = (q.topic_id, q.docno)
        if key in seen:
            raise ValidationError(f"duplicate (topic, docno) pair {key}")
        seen.add(key)
    _write_text(sink, "".join(f"{q.topic_id} 0 {q.docno} {q.grade}\n" for q in ordered))


def parse_run(source: Source) -> List[RunEntry]:
    """Parse 6-column run lines ``topic_id Q0 docno rank score tag``."""
    entries: List[RunEntry] = []
    for lineno, line, _ in _iter_lines(source):
        line = line.strip()
        if not line:
            continue
        cols = line.split()
        if len(cols) != 6:
            raise ParseError(f"expected 6 columns, got {len(cols)}: {line!r}", lineno)
        try:
            entries.append(
                RunEntry(int(cols[0]), cols[2], int(cols[3]), float(cols[4]), cols[5])
            )
        except ValueError as exc:
            raise ParseError(f"bad run line {line!r}: {exc}", lineno) from None
    validate_run(entries)
    return entries


def validate_run(entries: Sequence[RunEntry]) -> None:
    """Ranks must be 1..n without gaps per topic, scores non-increasing."""
    by_topic: Dict[int, List[RunEntry]] = {}
    for e in entries:
        by_topic.setdefault(e.topic_id, []).append(e)
    for topic_id, group in by_topic.items():
        group = sorted(group, key=lambda e: e.rank)
        for expected, e in enumerate(group, start=1):
            if e.rank != expected:
                raise ValidationError(
                    f"topic {topic_id}: ranks have gaps or duplicates near rank {e.rank}"
                )
        for prev, cur in zip(group, group[1:]):
            if cur.score > prev.score:
                raise ValidationError(
                    f"topic {topic_id}: score increases from rank {prev.rank} to {cur.rank}"
                )
        docnos = [e.docno for e in group]
        if len(set(docnos)) != len(docnos):
            raise ValidationError(f"topic {topic_id}: duplicate docno in run")


def format_score(score: float) -> str:
    return format(score, ".6f")


def write_run(entries: Iterable[RunEntry], sink) -> None:
    entries = sorted(entries, key=lambda e: (e.topic_id, e.rank))
    validate_run(entries)
    _write_text(
        sink,
        "".join(
            f"{e.topic_id} Q0 {e.docno} {e.rank} {format_score(e.score)} {e.run_tag}\n"
            for e in entries
        ),
    )


def _write_text(sink, text: str) -> None:
    if isinstance(sink, (str, Path)):
        path = Path(sink)
        if path.suffix == ".gz":
            with gzip.open(path, "wt", encoding="utf-8") as fh:
                fh.write(text)
        else:
            path.write_text(text, encoding="utf-8")
    else:
        sink.write(text)
