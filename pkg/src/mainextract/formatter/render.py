"""Markdown and plain-text rendering."""

from __future__ import annotations

from ..dom import BLOCK_TAGS, INVISIBLE_TAGS, DomTree, Node, Text, collapse_ws
from .items import ContentItem, ContentList

__all__ = ["item_to_markdown", "content_list_to_markdown", "main_html_to_plain_text"]

_BREAK = "\x00"


def _list_markdown(ordered: bool, entries: list[str]) -> str:
    lines = []
    counters: dict[int, int] = {}
    for entry in entries:
        text = entry.lstrip(" ")
        depth = (len(entry) - len(text)) // 2
        counters = {d: n for d, n in counters.items() if d <= depth}
        counters[depth] = counters.get(depth, 0) + 1
        marker = f"{counters[depth]}." if ordered else "-"
        lines.append("  " * depth + f"{marker} {text}")
    return "\n".join(lines)


def _fence_for(text: str) -> str:
    fence = "```"
    while fence in text:
        fence += "`"
    return fence


def item_to_markdown(item: ContentItem) -> str:
    c = item.content
    t = item.type
    if t == "title":
        return "#" * c["level"] + " " + c["title_content"]
    if t == "paragraph":
        return c["text"]
    if t == "code":
        if c["inline"]:
            return f"`{c['text']}`" if "`" not in c["text"] else f"`` {c['text']} ``"
        fence = _fence_for(c["text"])
        body = c["text"] if c["text"].endswith("\n") else c["text"] + "\n"
        return f"{fence}{c['language'] or ''}\n{body}{fence}"
    if t == "formula":
        return f"$${c['latex']}$$" if c["mode"] == "display" else f"${c['latex']}$"
    if t == "table":
        return c["body"]
    if t == "list":
        return _list_markdown(c["ordered"], c["items"])
    return f"![{c['alt'] or ''}]({c['src']})"


def content_list_to_markdown(content: ContentList | list[ContentItem]) -> str:
    items = content.items if isinstance(content, ContentList) else content
    return "\n\n".join(item_to_markdown(i) for i in items)


def main_html_to_plain_text(main) -> str:
    """Visible text with one line per block element."""
    tree = main.tree if hasattr(main, "tree") else main
    root = tree.body if isinstance(tree, DomTree) else tree
    if root is None:
        return ""
    parts: list[str] = []

    def walk(n: Node) -> None:
        if isinstance(n, Text):
            parts.append(n.data)
            return
        if n.tag in INVISIBLE_TAGS:
            return
        if n.tag == "br":
            parts.append(_BREAK)
            return
        block = n.tag in BLOCK_TAGS
        if block:
            parts.append(_BREAK)
        for c in n.children:
            walk(c)
        if block:
            parts.append(_BREAK)

    walk(root)
    # newlines inside text nodes are ordinary whitespace; only structure breaks lines
    joined = "".join(parts)
    lines = (collapse_ws(line) for line in joined.split(_BREAK))
    return "\n".join(line for line in lines if line)
