"""Typed content items and their JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

ITEM_TYPES = ("title", "paragraph", "code", "formula", "table", "list", "image", "video", "audio")
MEDIA_TYPES = ("image", "video", "audio")

_PAYLOAD_KEYS = {
    "title": {"title_content", "level"},
    "paragraph": {"text"},
    "code": {"text", "language", "inline"},
    "formula": {"latex", "mode"},
    "table": {"repr", "body"},
    "list": {"ordered", "items"},
    "image": {"src", "alt"},
    "video": {"src", "alt"},
    "audio": {"src", "alt"},
}


@dataclass
class ContentItem:
    type: str
    content: dict
    raw_content: str | None = None

    def __post_init__(self) -> None:
        if self.type not in _PAYLOAD_KEYS:
            raise ValueError(f"unknown content item type {self.type!r}")
        keys = set(self.content)
        if keys != _PAYLOAD_KEYS[self.type]:
            raise ValueError(f"{self.type} payload needs keys {sorted(_PAYLOAD_KEYS[self.type])}, got {sorted(keys)}")
        if self.type == "title" and not 1 <= self.content["level"] <= 6:
            raise ValueError("title level must be 1..6")
        if self.type == "formula" and self.content["mode"] not in ("inline", "display"):
            raise ValueError("formula mode must be inline or display")
        if self.type == "table" and self.content["repr"] not in ("markdown", "html"):
            raise ValueError("table repr must be markdown or html")

    @property
    def bbox(self) -> None:
        return None

    def to_json(self) -> dict[str, Any]:
        return {"type": self.type, "bbox": None, "raw_content": self.raw_content, "content": dict(self.content)}

    @classmethod
    def from_json(cls, obj: dict) -> "ContentItem":
        return cls(obj["type"], dict(obj["content"]), obj.get("raw_content"))

    # constructors
    @classmethod
    def title(cls, text: str, level: int, raw: str | None = None) -> "ContentItem":
        return cls("title", {"title_content": text, "level": level}, raw)

    @classmethod
    def paragraph(cls, text: str, raw: str | None = None) -> "ContentItem":
        return cls("paragraph", {"text": text}, raw)

    @classmethod
    def code(cls, text: str, language: str | None, inline: bool, raw: str | None = None) -> "ContentItem":
        return cls("code", {"text": text, "language": language, "inline": inline}, raw)

    @classmethod
    def formula(cls, latex: str, mode: str, raw: str | None = None) -> "ContentItem":
        return cls("formula", {"latex": latex, "mode": mode}, raw)

    @classmethod
    def table(cls, repr_: str, body: str, raw: str | None = None) -> "ContentItem":
        return cls("table", {"repr": repr_, "body": body}, raw)

    @classmethod
    def list_(cls, ordered: bool, items: list[str], raw: str | None = None) -> "ContentItem":
        return cls("list", {"ordered": ordered, "items": list(items)}, raw)

    @classmethod
    def media(cls, kind: str, src: str, alt: str | None, raw: str | None = None) -> "ContentItem":
        return cls(kind, {"src": src, "alt": alt}, raw)


@dataclass
class ContentList:
    items: list[ContentItem] = field(default_factory=list)
    doc_id: str = ""

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def to_json(self) -> list[dict]:
        return [item.to_json() for item in self.items]

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False)

    @classmethod
    def from_json(cls, data: list[dict], doc_id: str = "") -> "ContentList":
        return cls([ContentItem.from_json(d) for d in data], doc_id)
