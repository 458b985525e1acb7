"""Code block recognition, merging and language inference."""

from __future__ import annotations

import json
import re
from functools import lru_cache
from importlib import resources

from ..dom import INVISIBLE_TAGS, Element, Node, Text, text_content

__all__ = ["guess_language", "language_from_hints", "is_code_block", "is_line_numbered_table", "code_block_text", "hinted_language"]

_HINT_PATTERNS = [
    re.compile(r"^(?:language|lang)-([\w+#.-]+)$", re.I),
    re.compile(r"^highlight-(?:source-)?([\w+#-]+)$", re.I),
    re.compile(r"^brush:([\w+#-]+);?$", re.I),
]
_LINENO_CLASSES = frozenset({"linenos", "lineno", "gutter", "line-numbers", "blob-num", "line-number", "ln"})
_GENERIC = frozenset({"code", "source", "text", "highlight"})


@lru_cache(maxsize=None)
def _table() -> tuple[dict[str, str | None], list[tuple[str, list[re.Pattern]]]]:
    data = json.loads(resources.files("mainextract.data").joinpath("code_languages.json").read_text("utf-8"))
    patterns = [(lang, [re.compile(p, re.M) for p in pats]) for lang, pats in data["patterns"]]
    return data["aliases"], patterns


def _canonical(name: str) -> str | None:
    aliases, patterns = _table()
    name = name.lower()
    if name in aliases:
        return aliases[name]
    known = {lang for lang, _ in patterns}
    return name if name in known or name not in _GENERIC else None


def language_from_hints(el: Element) -> str | None:
    """Language named by class tokens or a data-lang attribute, if any."""
    for attr in ("data-lang", "data-language"):
        if el.get(attr):
            return _canonical(el.get(attr))
    cls = el.get("class") or ""
    # "brush: python;" is a single hint spread over two tokens
    m = re.search(r"brush:\s*([\w+#-]+)", cls)
    if m:
        return _canonical(m.group(1))
    for token in cls.split():
        for pat in _HINT_PATTERNS:
            m = pat.match(token)
            if m:
                return _canonical(m.group(1))
    return None


def hinted_language(el: Element, stop: Element | None = None) -> str | None:
    """Search the element, its descendants, then ancestors up to ``stop``."""
    for node in el.iter_elements():
        lang = language_from_hints(node)
        if lang:
            return lang
    cur = el.parent
    while cur is not None and cur is not stop:
        lang = language_from_hints(cur)
        if lang:
            return lang
        cur = cur.parent
    return None


def guess_language(text: str) -> str | None:
    """Keyword/regex scoring; ties go to the language listed first."""
    _, patterns = _table()
    best, best_score = None, 0
    for lang, pats in patterns:
        score = sum(1 for p in pats if p.search(text))
        if score > best_score:
            best, best_score = lang, score
    return best


def _class_tokens(el: Element) -> set[str]:
    return set((el.get("class") or "").lower().split())


def is_line_numbered_table(el: Element) -> bool:
    if el.tag != "table":
        return False
    cells = [c for c in el.iter_elements() if c.tag in ("td", "th")]
    numbered = [c for c in cells if _class_tokens(c) & _LINENO_CLASSES]
    return bool(numbered) and len(numbered) < len(cells)


def is_code_block(el: Element) -> bool:
    if el.tag == "pre" or el.tag == "listing":
        return True
    if el.tag == "code":
        return "\n" in text_content(el).strip("\n")
    return is_line_numbered_table(el)


def _text_without_linenos(node: Node) -> str:
    if isinstance(node, Text):
        return node.data
    if node.tag in INVISIBLE_TAGS or _class_tokens(node) & _LINENO_CLASSES:
        return ""
    return "".join(_text_without_linenos(c) for c in node.children)


def code_block_text(el: Element) -> str:
    """Source text of a code block, byte-exact, with gutter numbers removed."""
    if el.tag != "table":
        return _text_without_linenos(el)
    lines = []
    for row in (r for r in el.iter_elements() if r.tag == "tr"):
        cells = [c for c in row.children if isinstance(c, Element) and c.tag in ("td", "th")]
        code_cells = [c for c in cells if not _class_tokens(c) & _LINENO_CLASSES]
        lines.append("".join(_text_without_linenos(c) for c in code_cells))
    return "\n".join(lines)
