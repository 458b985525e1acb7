"""Text and table similarity metrics."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ..dom import Element, collapse_ws, parse_html, visible_text
from ..formatter.tables import row_cells, table_rows
from . import _kernels

__all__ = [
    "ParseFailure",
    "TreeNode",
    "tokenize",
    "ngrams",
    "rouge_n_f1",
    "edit_distance",
    "edit_similarity",
    "tree_edit_distance",
    "table_tree",
    "teds",
    "length_ratio",
]


class ParseFailure(ValueError):
    pass


_HAN = "㐀-䶿一-鿿豈-﫿\U00020000-\U0003134f"
_TOKEN_RE = re.compile(rf"[{_HAN}]|[^\W_{_HAN}]+")


def tokenize(text: str, scheme: str = "unicode_words") -> list[str]:
    """Han ideographs one per token; other letter/digit runs as whole tokens."""
    if scheme != "unicode_words":
        raise ValueError(f"unknown tokenizer scheme {scheme!r}")
    return _TOKEN_RE.findall(text)


def ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def rouge_n_f1(pred: str, gold: str, n: int = 5) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    p, g = tokenize(pred), tokenize(gold)
    if not p and not g:
        return 1.0
    if not p or not g:
        return 0.0
    # texts shorter than n fall back to the longest order both can supply
    order = min(n, len(p), len(g))
    pg, gg = ngrams(p, order), ngrams(g, order)
    match = sum((pg & gg).values())
    if match == 0:
        return 0.0
    precision = match / sum(pg.values())
    recall = match / sum(gg.values())
    return 2 * precision * recall / (precision + recall)


def edit_distance(s1: str, s2: str, use_numba: bool | None = None) -> int:
    return _kernels.levenshtein(_kernels.codepoints(s1), _kernels.codepoints(s2), use_numba)


def edit_similarity(s1: str, s2: str, use_numba: bool | None = None) -> float:
    longest = max(len(s1), len(s2))
    if longest == 0:
        return 1.0
    return 1.0 - edit_distance(s1, s2, use_numba) / longest


# ------------------------------------------------------------------ trees

@dataclass
class TreeNode:
    label: object
    children: list["TreeNode"] = field(default_factory=list)

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)


def _postorder(root: TreeNode, codes: dict) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Postorder labels, leftmost-leaf indices and keyroots."""
    labels: list[int] = []
    lml: list[int] = []

    def visit(node: TreeNode) -> int:
        first = -1
        for child in node.children:
            leaf = visit(child)
            if first < 0:
                first = leaf
        idx = len(labels)
        labels.append(codes.setdefault(node.label, len(codes)))
        lml.append(first if first >= 0 else idx)
        return lml[-1]

    visit(root)
    # a keyroot is the highest-numbered node sharing its leftmost leaf
    last: dict[int, int] = {}
    for i, leaf in enumerate(lml):
        last[leaf] = i
    keyroots = sorted(last.values())
    return (np.array(labels, dtype=np.int64), np.array(lml, dtype=np.int64), np.array(keyroots, dtype=np.int64))


def tree_edit_distance(a: TreeNode | None, b: TreeNode | None, use_numba: bool | None = None) -> int:
    """Unit-cost ordered tree edit distance; ``None`` is the empty tree."""
    if a is None or b is None:
        return (a.size() if a is not None else 0) + (b.size() if b is not None else 0)
    codes: dict = {}
    pa, pb = _postorder(a, codes), _postorder(b, codes)
    return _kernels.zhang_shasha(*pa, *pb, use_numba=use_numba)


def table_tree(html: str) -> TreeNode | None:
    """table > tr > td/th tree of the first table in ``html``.

    Returns None (the empty tree) when there is no table or the table has
    no cells.
    """
    tree = parse_html(html) if html.strip() else None
    if tree is None:
        return None
    table = next((el for el in tree.root.iter_elements() if el.tag == "table"), None)
    if table is None or not any(row_cells(r) for r in table_rows(table)):
        return None
    return _table_node(table)


def _table_node(table: Element) -> TreeNode:
    rows = []
    for row in table_rows(table):
        cells = [TreeNode((c.tag, collapse_ws(visible_text(c)))) for c in row_cells(row)]
        rows.append(TreeNode(("tr", ""), cells))
    return TreeNode(("table", ""), rows)


def teds(table_a: str, table_b: str, use_numba: bool | None = None) -> float:
    ta, tb = table_tree(table_a), table_tree(table_b)
    if ta is None and tb is None:
        raise ParseFailure("neither input contains a table")
    longest = max(ta.size() if ta else 0, tb.size() if tb else 0)
    return 1.0 - tree_edit_distance(ta, tb, use_numba) / longest


def length_ratio(len_a: int, len_b: int) -> float:
    """Signed, max-normalized length difference in [-1, 1]."""
    longest = max(len_a, len_b)
    if longest == 0:
        return 0.0
    return (len_a - len_b) / longest
