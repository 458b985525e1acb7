"""Pull code blocks, formulas and tables out of Markdown for element-level scoring."""

from __future__ import annotations

import html
import re
from dataclasses import dataclass, field

from ..formatter.tables import parse_pipe_table
from .metrics import edit_similarity, teds

__all__ = ["MarkdownElements", "extract_elements", "pipe_table_to_html", "element_scores"]

_FENCE_RE = re.compile(r"^(?P<fence>`{3,}|~{3,})[^\n`]*\n(?P<body>.*?)\n?^(?P=fence)[ \t]*$", re.M | re.S)
_HTML_TABLE_RE = re.compile(r"<table\b.*?</table>", re.I | re.S)
_DISPLAY_RE = re.compile(r"\$\$(.+?)\$\$|\\\[(.+?)\\\]", re.S)
_INLINE_RE = re.compile(r"(?<![\\$])\$(?!\$)([^$\n]+?)(?<!\\)\$|\\\((.+?)\\\)")
_DELIM_ROW = re.compile(r"^\s*\|?\s*:?-{3,}:?\s*(\|\s*:?-{3,}:?\s*)*\|?\s*$")


@dataclass
class MarkdownElements:
    code: list[str] = field(default_factory=list)
    formulas: list[str] = field(default_factory=list)
    tables: list[str] = field(default_factory=list)  # HTML


def pipe_table_to_html(text: str) -> str:
    grid = parse_pipe_table(text)
    rows = []
    for i, row in enumerate(grid):
        tag = "th" if i == 0 else "td"
        rows.append("<tr>" + "".join(f"<{tag}>{html.escape(c)}</{tag}>" for c in row) + "</tr>")
    return "<table>" + "".join(rows) + "</table>"


def _pipe_tables(text: str) -> tuple[list[tuple[int, str]], str]:
    lines = text.split("\n")
    found: list[tuple[int, str]] = []
    keep: list[str] = []
    offset = 0
    i = 0
    while i < len(lines):
        if lines[i].lstrip().startswith("|") and i + 1 < len(lines) and _DELIM_ROW.match(lines[i + 1]):
            j = i + 2
            while j < len(lines) and lines[j].lstrip().startswith("|"):
                j += 1
            found.append((offset, pipe_table_to_html("\n".join(lines[i:j]))))
            for ln in lines[i:j]:
                offset += len(ln) + 1
            keep.append("")
            i = j
            continue
        keep.append(lines[i])
        offset += len(lines[i]) + 1
        i += 1
    return found, "\n".join(keep)


def extract_elements(markdown: str) -> MarkdownElements:
    out = MarkdownElements()
    out.code = [m.group("body") for m in _FENCE_RE.finditer(markdown)]
    rest = _FENCE_RE.sub("", markdown)
    # tables keep document order across both syntaxes
    tables: list[tuple[int, str]] = [(m.start(), m.group(0)) for m in _HTML_TABLE_RE.finditer(rest)]
    rest = _HTML_TABLE_RE.sub(lambda m: " " * len(m.group(0)), rest)
    pipes, rest = _pipe_tables(rest)
    out.tables = [t for _, t in sorted(tables + pipes, key=lambda p: p[0])]
    formulas: list[tuple[int, str]] = []
    for m in _DISPLAY_RE.finditer(rest):
        formulas.append((m.start(), (m.group(1) if m.group(1) is not None else m.group(2)).strip()))
    masked = _DISPLAY_RE.sub(lambda m: " " * len(m.group(0)), rest)
    for m in _INLINE_RE.finditer(masked):
        formulas.append((m.start(), (m.group(1) if m.group(1) is not None else m.group(2)).strip()))
    out.formulas = [f for _, f in sorted(formulas)]
    return out


def _paired(pred: list[str], gold: list[str], sim) -> float | None:
    """Mean similarity of order-paired elements; unmatched elements on either side score 0."""
    if not gold:
        return None
    total = sum(sim(p, g) for p, g in zip(pred, gold))
    return total / max(len(pred), len(gold))


def _teds_or_zero(a: str, b: str) -> float:
    try:
        return teds(a, b)
    except ValueError:
        return 0.0


def element_scores(pred_md: str, gold_md: str) -> dict[str, float | None]:
    """code/formula edit similarity and table TEDS; None where gold has no such element."""
    p, g = extract_elements(pred_md), extract_elements(gold_md)
    return {
        "code": _paired(p.code, g.code, edit_similarity),
        "formula": _paired(p.formulas, g.formulas, edit_similarity),
        "table": _paired(p.tables, g.tables, _teds_or_zero),
    }
