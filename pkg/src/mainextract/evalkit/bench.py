"""Benchmark record loading and track membership."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["BenchRecord", "BenchRecords", "SchemaError", "load_bench", "parse_records", "strip_marker", "record_tracks", "TRACKS"]

TRACKS = ("all", "simple", "mid", "hard", "table", "code", "equation", "conversational")
REQUIRED = ("track_id", "html")
META_KEYS = ("language", "style", "level", "table", "code", "equation")
_LEVELS = {"easy": "easy", "simple": "simple", "medium": "mid", "mid": "mid", "middle": "mid", "hard": "hard", "difficult": "hard"}
_TRUE = {"with", "true", "yes", "1", "y"}

_TAG_RE = re.compile(r"<[A-Za-z][^<>]*>")


class SchemaError(ValueError):
    def __init__(self, index: int, field_name: str | None, reason: str = "missing"):
        self.index = index
        self.field = field_name
        self.reason = reason
        where = f"field {field_name!r}" if field_name else "record"
        super().__init__(f"record {index}: {where} {reason}")


@dataclass
class BenchRecord:
    track_id: str
    html: str
    main_html: str = ""
    convert_main_content: str = ""
    groundtruth_content: str | None = None
    meta: dict = field(default_factory=dict)
    # untouched input, annotation markers included
    raw_html: str = ""

    @property
    def gold_markdown(self) -> str:
        return self.convert_main_content if self.convert_main_content else (self.groundtruth_content or "")


class BenchRecords(list):
    """A list of records that also carries per-record load errors."""

    def __init__(self, records=(), errors=()):
        super().__init__(records)
        self.errors: list[SchemaError] = list(errors)


def strip_marker(html: str, attr: str = "cc-select") -> str:
    """Remove an annotation attribute from every start tag, leaving text untouched."""
    pat = re.compile(r"\s+" + re.escape(attr) + r"""(?:\s*=\s*(?:"[^"]*"|'[^']*'|[^\s>]+))?(?=[\s/>])""", re.I)
    return _TAG_RE.sub(lambda m: pat.sub("", m.group(0)), html)


def _normalize_meta(meta) -> dict:
    meta = dict(meta or {})
    out = {k: "" for k in META_KEYS}
    for k, v in meta.items():
        out[k] = "" if v is None else str(v)
    level = out["level"].strip().lower()
    out["level"] = _LEVELS.get(level, level)
    return out


def _record(obj, index: int) -> BenchRecord:
    if not isinstance(obj, dict):
        raise SchemaError(index, None, "is not an object")
    for name in REQUIRED:
        if name not in obj or obj[name] is None:
            raise SchemaError(index, name)
    if not isinstance(obj["html"], str) or not obj["html"].strip():
        raise SchemaError(index, "html", "is empty")
    if "convert_main_content" not in obj and "groundtruth_content" not in obj:
        raise SchemaError(index, "convert_main_content")
    meta = obj.get("meta") or {}
    if not isinstance(meta, dict):
        raise SchemaError(index, "meta", "is not an object")
    return BenchRecord(
        track_id=str(obj["track_id"]),
        html=strip_marker(obj["html"]),
        main_html=obj.get("main_html") or "",
        convert_main_content=obj.get("convert_main_content") or "",
        groundtruth_content=obj.get("groundtruth_content"),
        meta=_normalize_meta(meta),
        raw_html=obj["html"],
    )


def parse_records(text: str, lenient: bool = False, jsonl: bool | None = None) -> BenchRecords:
    stripped = text.lstrip("﻿").strip()
    if jsonl is None:
        jsonl = not stripped.startswith("[")
        if jsonl and stripped.startswith("{"):
            # a single pretty-printed object is JSON, one object per line is JSONL
            try:
                json.loads(stripped)
                jsonl = False
            except json.JSONDecodeError:
                pass
    raw: list = []
    errors: list[SchemaError] = []
    if jsonl:
        for i, line in enumerate(ln for ln in stripped.splitlines() if ln.strip()):
            try:
                raw.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raw.append(SchemaError(i, None, f"is not valid JSON ({exc.msg})"))
    else:
        data = json.loads(stripped) if stripped else []
        raw = data if isinstance(data, list) else [data]
    records = []
    for i, obj in enumerate(raw):
        try:
            if isinstance(obj, SchemaError):
                raise obj
            records.append(_record(obj, i))
        except SchemaError as exc:
            if not lenient:
                raise
            errors.append(exc)
    return BenchRecords(records, errors)


def load_bench(path, lenient: bool = False) -> BenchRecords:
    """Load JSON or JSONL benchmark records; ``lenient`` collects bad records instead of raising."""
    path = Path(path)
    text = path.read_text(encoding="utf-8-sig")
    jsonl = True if path.suffix == ".jsonl" else (False if path.suffix == ".json" else None)
    return parse_records(text, lenient, jsonl)


def _flag(value: str) -> bool:
    return value.strip().lower() in _TRUE


def record_tracks(rec: BenchRecord) -> list[str]:
    tracks = ["all"]
    level = rec.meta.get("level", "")
    if level in ("easy", "simple"):
        tracks.append("simple")
    elif level in ("mid", "hard"):
        tracks.append(level)
    for name in ("table", "code", "equation"):
        if _flag(rec.meta.get(name, "")):
            tracks.append(name)
    if rec.meta.get("style", "").strip().lower() == "conversational":
        tracks.append("conversational")
    return tracks
