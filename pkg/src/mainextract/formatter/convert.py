"""Main-HTML to content list.

Each element reaching block level goes through the detectors in a fixed
order (formula, code, table, list, title, media) and anything left over
is flattened into paragraphs.  Runs of inline content between block
elements become one paragraph each.
"""

from __future__ import annotations


from ..dom import BLOCK_TAGS, INVISIBLE_TAGS, DomTree, Element, Node, Text, collapse_ws, serialize_node, text_content, visible_text
from .code import code_block_text, guess_language, hinted_language, is_code_block, language_from_hints
from .formula import FormulaError, formula_source, is_formula_element, is_render_artifact, split_raw_tex, _DELIMITED, split_match
from .items import ContentItem, ContentList
from .tables import has_nested_table, is_simple_table, pipe_table, row_cells, table_rows

__all__ = ["to_content_list", "inline_text", "MAX_LIST_DEPTH"]

MAX_LIST_DEPTH = 3
_HEADINGS = {f"h{i}": i for i in range(1, 7)}
_MEDIA = {"img": "image", "picture": "image", "video": "video", "audio": "audio"}
_BR = "\x00"


def _is_display_formula(el: Element) -> bool:
    if not is_formula_element(el):
        return False
    try:
        return formula_source(el)[1] == "display"
    except FormulaError:
        return False


def _is_inline_code(el: Element) -> bool:
    return el.tag == "code" and not is_code_block(el)


def _has_block_descendant(el: Element) -> bool:
    return any(d is not el and d.tag in BLOCK_TAGS for d in el.iter_elements()) and not is_formula_element(el)


def _is_block_level(node: Node) -> bool:
    if isinstance(node, Text):
        return False
    if is_formula_element(node):
        return _is_display_formula(node)
    if _is_inline_code(node):
        return False
    # media stay inline: a run emits its media items right after its text
    if node.tag in BLOCK_TAGS or node.tag in ("listing", "code"):
        return True
    return _has_block_descendant(node)


def _code_span(text: str) -> str:
    body = collapse_ws(text)
    if not body:
        return " " if text else ""
    fence = "``" if "`" in body else "`"
    pad = " " if fence == "``" else ""
    # edge whitespace separates words, so keep it outside the span
    lead = " " if text[:1].isspace() else ""
    trail = " " if text[-1:].isspace() else ""
    return f"{lead}{fence}{pad}{body}{pad}{fence}{trail}"


def _inline_pieces(node: Node, out: list[str], media: list[Element]) -> None:
    if isinstance(node, Text):
        out.append(node.data)
        return
    if is_formula_element(node):
        try:
            latex, mode = formula_source(node)
            out.append(f"$${latex}$$" if mode == "display" else f"${latex}$")
        except FormulaError:
            out.append(visible_text(node))
        return
    if node.tag in INVISIBLE_TAGS or is_render_artifact(node):
        return
    if node.tag == "br":
        out.append(_BR)
        return
    if node.tag in _MEDIA:
        media.append(node)
        return
    if node.tag == "code":
        out.append(_code_span(code_block_text(node)))
        return
    block = node.tag in BLOCK_TAGS
    if block:
        out.append(" ")
    for c in node.children:
        _inline_pieces(c, out, media)
    if block:
        out.append(" ")


def _normalize_lines(raw: str) -> str:
    lines = (collapse_ws(part) for part in raw.split(_BR))
    return "\n".join(ln for ln in lines if ln)


def inline_text(nodes: list[Node]) -> tuple[str, list[Element]]:
    """Flatten nodes to one line of text (``<br>`` kept as newline) plus media found."""
    out: list[str] = []
    media: list[Element] = []
    for n in nodes:
        _inline_pieces(n, out, media)
    return _normalize_lines("".join(out)), media


def _normalize_tex_delimiters(text: str) -> str:
    parts = split_raw_tex(text)
    if all(mode is None for _, mode in parts):
        return text
    return "".join(seg if mode is None else (f"$${seg}$$" if mode == "display" else f"${seg}$") for seg, mode in parts)


def _media_item(el: Element) -> ContentItem | None:
    if el.tag == "picture":
        img = next((n for n in el.iter_elements() if n.tag == "img"), None)
        if img is None:
            return None
        el = img
    kind = _MEDIA[el.tag]
    src = el.get("src")
    if src is None:
        source = next((n for n in el.iter_elements() if n.tag == "source" and n.get("src")), None)
        src = source.get("src") if source is not None else ""
    alt = el.get("alt") if kind == "image" else (el.get("title") or None)
    return ContentItem.media(kind, src, alt, serialize_node(el))


class _Converter:
    def __init__(self) -> None:
        self.items: list[ContentItem] = []
        self.linearizing = 0

    # -------------------------------------------------------------- blocks
    def container(self, el: Element) -> None:
        children = el.children
        i = 0
        run: list[Node] = []
        while i < len(children):
            child = children[i]
            if not _is_block_level(child):
                run.append(child)
                i += 1
                continue
            self.flush(run)
            run = []
            if isinstance(child, Element) and is_code_block(child):
                i = self.code_run(children, i)
                continue
            self.element(child)
            i += 1
        self.flush(run)

    def element(self, el: Element) -> None:
        if is_formula_element(el):
            self.formula(el)
        elif el.tag in INVISIBLE_TAGS or is_render_artifact(el):
            return
        elif is_code_block(el):
            self.code_run([el], 0)
        elif el.tag == "table":
            self.table(el)
        elif el.tag in ("ul", "ol", "dl", "menu"):
            self.list(el)
        elif el.tag in _HEADINGS:
            self.title(el)
        elif el.tag in _MEDIA:
            item = _media_item(el)
            if item is not None:
                self.items.append(item)
        else:
            self.container(el)

    def formula(self, el: Element) -> None:
        try:
            latex, mode = formula_source(el)
        except FormulaError:
            text = visible_text(el) or collapse_ws(text_content(el))
            if text:
                self.items.append(ContentItem.paragraph(text, serialize_node(el)))
            return
        self.items.append(ContentItem.formula(latex, mode, serialize_node(el)))

    def code_run(self, siblings: list[Node], start: int) -> int:
        """Merge a code block with directly following code blocks; return next index."""
        blocks = [siblings[start]]
        j = start + 1
        while j < len(siblings):
            nxt = siblings[j]
            if isinstance(nxt, Text) and not nxt.data.strip():
                j += 1
                continue
            if isinstance(nxt, Element) and is_code_block(nxt):
                blocks.append(nxt)
                j += 1
                continue
            break
        # trailing whitespace text stays with the following run
        end = start + 1
        for k in range(start + 1, j):
            if siblings[k] is blocks[-1]:
                end = k + 1
        texts = [code_block_text(b) for b in blocks]
        texts = [t[:-1] if t.endswith("\n") else t for t in texts[:-1]] + texts[-1:]
        text = "\n".join(texts)
        lang = None
        for b in blocks:
            lang = hinted_language(b)
            if lang:
                break
        if lang is None:
            lang = guess_language(text)
        if text.strip():
            raw = "".join(serialize_node(b) for b in blocks)
            self.items.append(ContentItem.code(text, lang, False, raw))
        return end

    def table(self, el: Element) -> None:
        caption = next((c for c in el.children if isinstance(c, Element) and c.tag == "caption"), None)
        if caption is not None:
            text, _ = inline_text(caption.children)
            if text:
                self.items.append(ContentItem.paragraph(text, serialize_node(caption)))
        if self.linearizing or has_nested_table(el):
            # every cell of every table in the nest becomes flow content
            self.linearizing += 1
            try:
                for row in table_rows(el):
                    for cell in row_cells(row):
                        self.container(cell)
            finally:
                self.linearizing -= 1
            return
        rows = table_rows(el)
        if not any(row_cells(r) for r in rows):
            return
        raw = serialize_node(el)
        if is_simple_table(el):
            grid, media = [], []
            for row in rows:
                cells = row_cells(row)
                if not cells:
                    continue
                texts = []
                for c in cells:
                    t, m = inline_text(c.children)
                    texts.append(t.replace("\n", " "))
                    media.extend(m)
                grid.append(texts)
            self.items.append(ContentItem.table("markdown", pipe_table(grid), raw))
        else:
            self.items.append(ContentItem.table("html", raw, raw))

    def list(self, el: Element) -> None:
        entries: list[str] = []
        self._list_entries(el, 0, entries)
        if entries:
            self.items.append(ContentItem.list_(el.tag == "ol", entries, serialize_node(el)))

    def _list_entries(self, el: Element, depth: int, out: list[str]) -> None:
        indent = "  " * min(depth, MAX_LIST_DEPTH - 1)
        for child in el.children:
            if not isinstance(child, Element):
                continue
            if child.tag in ("li", "dt", "dd"):
                own = [c for c in child.children if not (isinstance(c, Element) and c.tag in ("ul", "ol", "dl", "menu"))]
                text, _ = inline_text(own)
                if text:
                    extra = "  " if child.tag == "dd" and depth < MAX_LIST_DEPTH - 1 else ""
                    out.append(indent + extra + text.replace("\n", " "))
                for sub in child.children:
                    if isinstance(sub, Element) and sub.tag in ("ul", "ol", "dl", "menu"):
                        self._list_entries(sub, depth + 1, out)
            elif child.tag in ("ul", "ol", "dl", "menu"):
                self._list_entries(child, depth + 1, out)

    def title(self, el: Element) -> None:
        text, media = inline_text(el.children)
        if text:
            self.items.append(ContentItem.title(text.replace("\n", " "), _HEADINGS[el.tag], serialize_node(el)))
        self._media(media)

    def _media(self, media: list[Element]) -> None:
        for m in media:
            item = _media_item(m)
            if item is not None:
                self.items.append(item)

    # -------------------------------------------------------------- inline
    def flush(self, run: list[Node]) -> None:
        if not run:
            return
        significant = [n for n in run if not (isinstance(n, Text) and not n.data.strip())]
        significant = [n for n in significant if not (isinstance(n, Element) and (n.tag in INVISIBLE_TAGS and not is_formula_element(n) or is_render_artifact(n)))]
        if len(significant) == 1 and isinstance(significant[0], Element):
            only = significant[0]
            if is_formula_element(only):
                self.formula(only)
                return
            if _is_inline_code(only):
                text = code_block_text(only)
                if text.strip():
                    self.items.append(ContentItem.code(text.strip(), language_from_hints(only), True, serialize_node(only)))
                return
        text, media = inline_text(run)
        if text:
            m = _DELIMITED.fullmatch(text)
            raw = "".join(serialize_node(n) for n in run).strip()
            if m:
                latex, mode = split_match(m)
                self.items.append(ContentItem.formula(latex, mode, raw))
            else:
                self.items.append(ContentItem.paragraph(_normalize_tex_delimiters(text), raw))
        self._media(media)


def to_content_list(main, doc_id: str | None = None) -> ContentList:
    """Typed content items of a Main-HTML document in document order."""
    tree = main.tree if hasattr(main, "tree") else main
    if doc_id is None:
        doc_id = getattr(main, "source_doc_id", "")
    conv = _Converter()
    root = tree.body if isinstance(tree, DomTree) else tree
    if root is None and isinstance(tree, DomTree):
        root = tree.root
    if root is not None:
        conv.container(root)
    return ContentList(conv.items, doc_id or "")
