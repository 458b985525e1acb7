import gzip
import io

import pytest
from warcio.statusandheaders import StatusAndHeaders
from warcio.warcwriter import WARCWriter

from mainextract.ingest import InputError, read_documents, sniff_format


def make_warc(records, gz=True) -> bytes:
    buf = io.BytesIO()
    writer = WARCWriter(buf, gzip=gz)
    for url, ctype, body, rec_type in records:
        if rec_type == "response":
            headers = StatusAndHeaders("200 OK", [("Content-Type", ctype)], protocol="HTTP/1.1")
            rec = writer.create_warc_record(url, "response", payload=io.BytesIO(body), http_headers=headers)
        else:
            rec = writer.create_warc_record(url, rec_type, payload=io.BytesIO(body))
        writer.write_record(rec)
    return buf.getvalue()


def test_sniff():
    assert sniff_format(b"<html>", "a.html") == "html"
    assert sniff_format(b'{"html": "x"}\n') == "jsonl"
    assert sniff_format(b"WARC/1.0\r\n") == "warc"
    assert sniff_format(gzip.compress(b"WARC/1.0\r\n")) == "warc"
    assert sniff_format(b"", "x.warc.gz") == "warc"


def test_jsonl_with_bad_line(fixtures_dir):
    docs = read_documents(str(fixtures_dir / "three_one_bad.jsonl"))
    assert len(docs) == 3
    assert [d.error is None for d in docs] == [True, False, True]
    assert docs[1].error.startswith("MalformedRecord")


def test_jsonl_missing_html():
    docs = read_documents("-", b'{"url": "http://a/"}\n{"url": "http://b/", "html": "<p>x</p>"}\n')
    assert docs[0].error == "MalformedRecord: missing html"
    assert docs[1].html == "<p>x</p>" and docs[1].url == "http://b/"


def test_warc_keeps_html_responses_only():
    data = make_warc([
        ("http://a.example/", "text/html; charset=utf-8", "<p>café</p>".encode(), "response"),
        ("http://a.example/img", "image/png", b"\x89PNG", "response"),
        ("http://a.example/req", "", b"GET / HTTP/1.1\r\n\r\n", "request"),
        ("http://b.example/", "application/xhtml+xml", b"<p>b</p>", "response"),
    ])
    docs = read_documents("-", data)
    assert [d.url for d in docs] == ["http://a.example/", "http://b.example/"]
    assert docs[0].encoding == "utf-8" and docs[0].html == "<p>café</p>".encode()


def test_uncompressed_warc(tmp_path):
    path = tmp_path / "x.warc"
    path.write_bytes(make_warc([("http://u/", "text/html", b"<p>u</p>", "response")], gz=False))
    [doc] = read_documents(str(path))
    assert doc.html == b"<p>u</p>"


def test_corrupt_warc():
    with pytest.raises(InputError):
        read_documents("bad.warc.gz", b"\x1f\x8b not really gzip")


def test_missing_file(tmp_path):
    with pytest.raises(InputError):
        read_documents(str(tmp_path / "nope.html"))


def test_single_html(tmp_path):
    path = tmp_path / "page.html"
    path.write_bytes(b"<p>hi</p>")
    [doc] = read_documents(str(path))
    assert doc.doc_id == "page" and doc.url.startswith("file://") and doc.html == b"<p>hi</p>"


def test_json_document_and_array():
    one = read_documents("-", b'{\n  "track_id": "t",\n  "html": "<p>x</p>"\n}\n')
    assert [(d.doc_id, d.html) for d in one] == [("t", "<p>x</p>")]
    many = read_documents("-", b'[{"html": "<p>a</p>"}, 3]')
    assert many[0].html == "<p>a</p>" and many[1].error.startswith("MalformedRecord")
