"""Parser/writer round trips and validation for the TREC-style formats."""

import gzip
import io
import os

import pytest

from tetunir.corpus import (
    Document,
    ParseError,
    Qrel,
    RunEntry,
    Topic,
    ValidationError,
    parse_documents,
    parse_qrels,
    parse_run,
    parse_topics,
    write_documents,
    write_qrels,
    write_run,
    write_topics,
)

DOC_BLOCK = """<DOC>
<DOCNO>doc1</DOCNO>
<TITLE>Eleisaun jerál iha Timor</TITLE>
<URL>http://example.tl/1</URL>
<SOURCE>example</SOURCE>
<DATE>2023-05-21</DATE>
<CONTENT>Povu vota iha loron eleisaun nian.</CONTENT>
</DOC>
"""


def test_single_block_parses_with_matching_fields():
    [doc] = parse_documents(io.StringIO(DOC_BLOCK))
    assert doc.docno == "doc1"
    assert doc.title == "Eleisaun jerál iha Timor"
    assert doc.url == "http://example.tl/1"
    assert doc.source == "example"
    assert doc.date == "2023-05-21"
    assert doc.content == "Povu vota iha loron eleisaun nian."


def test_empty_stream_yields_nothing():
    assert list(parse_documents(io.StringIO(""))) == []
    assert parse_topics(io.StringIO("")) == []
    assert parse_qrels(io.StringIO("")) == []
    assert parse_run(io.StringIO("")) == []


def test_document_round_trip():
    docs = [
        Document("d1", "Titlu ida", "http://x", "src", "2020", "konteúdu ne'ebé naruk"),
        Document("d2", "", "", "", "", ""),
        Document("d3", "Multi\nline title", content="two\nlines here"),
    ]
    buf = io.StringIO()
    write_documents(docs, buf)
    parsed = list(parse_documents(io.StringIO(buf.getvalue())))
    assert parsed == docs
    # parse . write . parse is parse
    buf2 = io.StringIO()
    write_documents(parsed, buf2)
    assert buf2.getvalue() == buf.getvalue()


def test_tags_case_insensitive_and_unknown_tags_ignored():
    text = DOC_BLOCK.replace("<DOCNO>", "<docno>").replace("</DOCNO>", "</docno>")
    text = text.replace("</DOC>", "<EXTRA>whatever</EXTRA>\n</doc>")
    [doc] = parse_documents(io.StringIO(text))
    assert doc.docno == "doc1"


def test_missing_docno_is_parse_error_with_line():
    text = "junk\n<DOC>\n<TITLE>x</TITLE>\n</DOC>\n"
    with pytest.raises(ParseError) as err:
        list(parse_documents(io.StringIO(text)))
    assert err.value.line == 2


def test_unterminated_block_is_parse_error_with_docno_context():
    text = "<DOC>\n<DOCNO>lost-doc</DOCNO>\n<TITLE>x</TITLE>\n"
    with pytest.raises(ParseError, match="lost-doc"):
        list(parse_documents(io.StringIO(text)))


def test_duplicate_docno_rejected():
    with pytest.raises(ParseError, match="duplicate docno"):
        list(parse_documents(io.StringIO(DOC_BLOCK + DOC_BLOCK)))


def test_record_byte_cap_fails_early():
    huge = "<DOC>\n<DOCNO>big</DOCNO>\n" + ("x" * 100 + "\n") * 64
    with pytest.raises(ParseError, match="exceeds"):
        list(parse_documents(io.StringIO(huge), max_record_bytes=1024))


def test_invalid_utf8_is_hard_error(tmp_path):
    path = tmp_path / "bad.trec"
    path.write_bytes(b"<DOC>\n<DOCNO>d1</DOCNO>\n<TITLE>\xff\xfe</TITLE>\n</DOC>\n")
    with pytest.raises(ParseError, match="UTF-8"):
        list(parse_documents(path))


def test_gzip_sniffing_by_extension(tmp_path):
    path = tmp_path / "docs.trec.gz"
    with gzip.open(path, "wt", encoding="utf-8") as fh:
        fh.write(DOC_BLOCK)
    [doc] = parse_documents(path)
    assert doc.docno == "doc1"


# -- topics ----------------------------------------------------------------

def test_topic_round_trip_and_open_tag_style():
    topics = [
        Topic(1, "eleisaun jerál", "Informasaun kona-ba eleisaun", "Relevante karik ..."),
        Topic(7, "moras dengue Dili", "", ""),
    ]
    buf = io.StringIO()
    write_topics(topics, buf)
    assert parse_topics(io.StringIO(buf.getvalue())) == topics

    classic = (
        "<top>\n<num> Number: 3\n<title> moras dengue\n"
        "<desc> Description:\nKazu dengue iha Dili\n"
        "<narr> Narrative:\nRelevante se ...\n</top>\n"
    )
    [topic] = parse_topics(io.StringIO(classic))
    assert topic == Topic(3, "moras dengue", "Kazu dengue iha Dili", "Relevante se ...")


def test_topic_validation():
    with pytest.raises(ValidationError):
        Topic(0, "x")
    with pytest.raises(ValidationError):
        Topic(1, "")
    with pytest.raises(ParseError, match="duplicate topic"):
        parse_topics(io.StringIO("<top><num>1</num><title>a</title></top>\n" * 2))


# -- qrels -------------------------------------------------------------------

def test_qrel_line_maps_fields_directly():
    [qrel] = parse_qrels(io.StringIO("7 0 doc42 3\n"))
    assert qrel == Qrel(7, "doc42", 3)


def test_qrels_round_trip_is_byte_identical():
    canonical = "".join(
        f"{t} 0 doc{d} {(t + d) % 4}\n" for t in (1, 2) for d in range(5)
    )
    parsed = parse_qrels(io.StringIO(canonical))
    buf = io.StringIO()
    write_qrels(parsed, buf)
    assert buf.getvalue() == canonical


def test_qrels_grade_and_duplicate_validation():
    with pytest.raises(ParseError, match="line 1"):
        parse_qrels(io.StringIO("1 0 d1 4\n"))
    with pytest.raises(ParseError, match="line 2"):
        parse_qrels(io.StringIO("1 0 d1 3\n1 0 d1 2\n"))
    with pytest.raises(ValidationError):
        Qrel(1, "d1", 9)


# -- runs ---------------------------------------------------------------------

def test_run_round_trip_and_ordering():
    entries = [
        RunEntry(2, "d9", 1, 1.5, "tag"),
        RunEntry(1, "d1", 1, 2.25, "tag"),
        RunEntry(1, "d2", 2, 1.0, "tag"),
    ]
    buf = io.StringIO()
    write_run(entries, buf)
    text = buf.getvalue()
    assert text.splitlines()[0] == "1 Q0 d1 1 2.250000 tag"
    assert parse_run(io.StringIO(text)) == sorted(
        entries, key=lambda e: (e.topic_id, e.rank)
    )
    buf2 = io.StringIO()
    write_run(parse_run(io.StringIO(text)), buf2)
    assert buf2.getvalue() == text


def test_run_rank_gap_and_score_order_rejected():
    with pytest.raises(ValidationError, match="gaps"):
        parse_run(io.StringIO("1 Q0 d1 1 2.0 t\n1 Q0 d2 3 1.0 t\n"))
    with pytest.raises(ValidationError, match="score increases"):
        parse_run(io.StringIO("1 Q0 d1 1 1.0 t\n1 Q0 d2 2 2.0 t\n"))
    with pytest.raises(ValidationError, match="duplicate docno"):
        parse_run(io.StringIO("1 Q0 d1 1 2.0 t\n1 Q0 d1 2 1.0 t\n"))


def test_write_to_path_and_gzip(tmp_path):
    qrels = [Qrel(1, "d1", 2)]
    plain = tmp_path / "q.qrels"
    gz = tmp_path / "q.qrels.gz"
    write_qrels(qrels, plain)
    write_qrels(qrels, gz)
    assert parse_qrels(plain) == qrels
    assert parse_qrels(gz) == qrels
    assert os.path.getsize(gz) != os.path.getsize(plain)
