"""Document sources: single HTML files, JSONL and WARC archives."""

from __future__ import annotations

import gzip
import io
import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

__all__ = ["RawDocument", "InputError", "read_documents", "sniff_format"]

_CHARSET_RE = re.compile(r"charset\s*=\s*[\"']?([\w.:-]+)", re.I)


class InputError(OSError):
    """The input as a whole cannot be read."""


@dataclass
class RawDocument:
    doc_id: str
    url: str
    html: str | bytes | None
    encoding: str | None = None
    error: str | None = None


def sniff_format(data: bytes, name: str = "") -> str:
    lower = name.lower()
    if lower.endswith((".warc", ".warc.gz", ".arc", ".arc.gz")):
        return "warc"
    if lower.endswith((".jsonl", ".ndjson", ".json")):
        return "jsonl"
    head = data[:4096]
    if head[:2] == b"\x1f\x8b":
        try:
            head = gzip.GzipFile(fileobj=io.BytesIO(data)).read(16)
        except OSError:
            return "html"
    if head.startswith(b"WARC/"):
        return "warc"
    first = head.lstrip(b"\xef\xbb\xbf \t\r\n")[:1]
    if first in (b"{", b"["):
        return "jsonl"
    return "html"


def _json_records(text: str) -> Iterator[tuple[int, object]]:
    """A whole JSON document (object or array of objects), else one record per line."""
    try:
        whole = json.loads(text)
    except ValueError:
        whole = None
    if isinstance(whole, dict):
        yield 0, whole
        return
    if isinstance(whole, list):
        yield from enumerate(whole)
        return
    for i, line in enumerate(ln for ln in text.splitlines() if ln.strip()):
        try:
            yield i, json.loads(line)
        except ValueError as exc:
            yield i, exc


def _jsonl_docs(data: bytes) -> Iterator[RawDocument]:
    text = data.decode("utf-8-sig", errors="replace")
    for i, obj in _json_records(text):
        if isinstance(obj, Exception) or not isinstance(obj, dict):
            reason = obj if isinstance(obj, Exception) else "record is not an object"
            yield RawDocument(str(i), "", None, error=f"MalformedRecord: {reason}")
            continue
        doc_id = str(obj.get("doc_id") or obj.get("track_id") or obj.get("id") or i)
        url = str(obj.get("url") or "")
        html = obj.get("html")
        if not isinstance(html, str):
            yield RawDocument(doc_id, url, None, error="MalformedRecord: missing html")
            continue
        yield RawDocument(doc_id, url, html)


def _warc_docs(data: bytes) -> Iterator[RawDocument]:
    from warcio.archiveiterator import ArchiveIterator

    try:
        for rec in ArchiveIterator(io.BytesIO(data), arc2warc=True):
            if rec.rec_type != "response":
                continue
            ctype = rec.http_headers.get_header("Content-Type", "") if rec.http_headers else ""
            if "html" not in ctype.lower():
                continue
            url = rec.rec_headers.get_header("WARC-Target-URI") or ""
            doc_id = rec.rec_headers.get_header("WARC-Record-ID") or url
            m = _CHARSET_RE.search(ctype)
            try:
                body = rec.content_stream().read()
            except Exception as exc:  # truncated member
                yield RawDocument(doc_id, url, None, error=f"WarcReadError: {exc}")
                continue
            yield RawDocument(doc_id, url, body, m.group(1) if m else None)
    except Exception as exc:
        raise InputError(f"cannot read WARC input: {exc}") from exc


def read_documents(path: str, data: bytes | None = None) -> list[RawDocument]:
    """Load every document from ``path`` ("-" reads ``data`` as stdin contents)."""
    name = "" if path == "-" else str(path)
    if data is None:
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from exc
    kind = sniff_format(data, name)
    if kind == "warc":
        return list(_warc_docs(data))
    if kind == "jsonl":
        return list(_jsonl_docs(data))
    stem = Path(name).stem if name else "stdin"
    return [RawDocument(stem, Path(name).resolve().as_uri() if name else "", data)]
