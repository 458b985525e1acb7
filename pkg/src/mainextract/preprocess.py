"""Block chunking and the two parallel block views.

``preprocess`` returns a simplified view (what a labeler reads) and a
mapping view (block addresses into the untouched original tree).  Both are
produced from the same chunking pass so index ``i`` always refers to the
same region of the page.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, fields
from enum import Enum
from pathlib import Path

from .dom import (
    BLOCK_TAGS,
    DomTree,
    Element,
    INVISIBLE_TAGS,
    Node,
    NodePath,
    Text,
    parse_fragment,
    serialize_node,
    visible_text,
)

__all__ = [
    "BlockKind",
    "Block",
    "PreprocessConfig",
    "SimplifiedBlock",
    "SimplifiedSequence",
    "MappingSequence",
    "EmptyDocument",
    "EMPTY_PLACEHOLDER",
    "strip_noncontent",
    "simplify_attributes",
    "chunk_blocks",
    "truncate_block",
    "preprocess",
    "block_nodes",
    "block_text",
]

EMPTY_PLACEHOLDER = "[empty]"

DEFAULT_REMOVED = frozenset(
    "style script header footer nav aside noscript iframe svg form button".split()
)

LIST_TAGS = frozenset({"ul", "ol", "dl"})
MEDIA_TAGS = frozenset({"img", "video", "audio", "picture"})
HEADING_TAGS = frozenset({"h1", "h2", "h3", "h4", "h5", "h6"})

# inline wrappers unwrapped in the simplified view; structure tags survive
_SIMPLIFIED_KEEP = BLOCK_TAGS | MEDIA_TAGS | {"a", "code", "br", "math"}

_WS = re.compile(r"\s+")


class EmptyDocument(ValueError):
    pass


class BlockKind(str, Enum):
    FLOW = "flow"
    TABLE = "table"
    LIST = "list"
    PRE = "pre"
    MEDIA = "media"


@dataclass(frozen=True)
class Block:
    root_path: NodePath
    kind: BlockKind
    source_order: int
    # number of consecutive siblings covered, >1 only for inline runs
    extent: int = 1


@dataclass
class PreprocessConfig:
    removed_tags: frozenset[str] = DEFAULT_REMOVED
    kept_attributes: tuple[str, ...] = ("class", "id")
    paragraph_truncation: int = 200
    table_cell_sample: int = 8
    list_item_sample: int = 10
    layout_table_split: bool = True

    def __post_init__(self) -> None:
        self.removed_tags = frozenset(self.removed_tags)
        self.kept_attributes = tuple(self.kept_attributes)
        if self.paragraph_truncation < 1:
            raise ValueError("paragraph_truncation must be >= 1")
        if self.table_cell_sample < 1 or self.list_item_sample < 1:
            raise ValueError("sample counts must be >= 1")

    @classmethod
    def from_dict(cls, data: dict) -> PreprocessConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown preprocess keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path: str | Path) -> PreprocessConfig:
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def to_dict(self) -> dict:
        return {
            "removed_tags": sorted(self.removed_tags),
            "kept_attributes": list(self.kept_attributes),
            "paragraph_truncation": self.paragraph_truncation,
            "table_cell_sample": self.table_cell_sample,
            "list_item_sample": self.list_item_sample,
            "layout_table_split": self.layout_table_split,
        }


@dataclass(frozen=True)
class SimplifiedBlock:
    index: int
    text: str
    kind: BlockKind
    truncated: bool


@dataclass
class SimplifiedSequence:
    blocks: list[SimplifiedBlock]
    doc_id: str = ""

    def __len__(self) -> int:
        return len(self.blocks)


@dataclass
class MappingSequence:
    blocks: list[Block]
    doc_id: str = ""

    def __len__(self) -> int:
        return len(self.blocks)


# ------------------------------------------------------------ tree passes

def strip_noncontent(tree: DomTree | Element, config: PreprocessConfig | None = None):
    """Return a copy with every element in ``removed_tags`` dropped subtree-wise."""
    config = config or PreprocessConfig()
    root = tree.root if isinstance(tree, DomTree) else tree
    out = _strip(root.copy(), config.removed_tags)
    return DomTree(out) if isinstance(tree, DomTree) else out


def _strip(el: Element, removed: frozenset[str]) -> Element:
    kept = []
    for child in el.children:
        if isinstance(child, Element):
            if child.tag in removed:
                continue
            _strip(child, removed)
        kept.append(child)
    el.children = []
    for child in kept:
        if isinstance(child, Text) and el.children and isinstance(el.children[-1], Text):
            el.children[-1].data += child.data
        else:
            el.append(child)
    return el


def simplify_attributes(tree: DomTree | Element, config: PreprocessConfig | None = None):
    """Return a copy where elements keep only ``kept_attributes`` (original order)."""
    config = config or PreprocessConfig()
    root = tree.root if isinstance(tree, DomTree) else tree
    keep = set(config.kept_attributes)
    out = root.copy()
    for el in out.iter_elements():
        el.attrs = [(k, v) for k, v in el.attrs if k in keep]
    return DomTree(out) if isinstance(tree, DomTree) else out


# --------------------------------------------------------------- chunking

def _is_math_script(el: Element) -> bool:
    return el.tag == "script" and (el.get("type") or "").lower().startswith("math/")


def _has_visible(node: Node) -> bool:
    if isinstance(node, Text):
        return bool(node.data.strip())
    if node.tag in MEDIA_TAGS or _is_math_script(node):
        return True
    if node.tag in INVISIBLE_TAGS:
        return False
    return any(_has_visible(c) for c in node.children)


class _Chunker:
    def __init__(self, root: Element, config: PreprocessConfig):
        self.root = root
        self.config = config
        self.blockish: dict[int, bool] = {}
        self.visible: dict[int, bool] = {}
        self.out: list[tuple[Node, BlockKind, int]] = []

    def has_block_desc(self, el: Element) -> bool:
        key = id(el)
        hit = self.blockish.get(key)
        if hit is None:
            hit = any(
                isinstance(c, Element) and (c.tag in BLOCK_TAGS or self.has_block_desc(c))
                for c in el.children
            )
            self.blockish[key] = hit
        return hit

    def vis(self, node: Node) -> bool:
        key = id(node)
        hit = self.visible.get(key)
        if hit is None:
            if isinstance(node, Text) or node.tag in MEDIA_TAGS or _is_math_script(node) or node.tag in INVISIBLE_TAGS:
                hit = _has_visible(node)
            else:
                hit = any(self.vis(c) for c in node.children)
            self.visible[key] = hit
        return hit

    def emit(self, node: Node, kind: BlockKind, extent: int = 1) -> None:
        self.out.append((node, kind, extent))

    def leaf_kind(self, el: Element) -> BlockKind:
        if el.tag in MEDIA_TAGS:
            return BlockKind.MEDIA
        if not visible_text(el) and any(isinstance(n, Element) and n.tag in MEDIA_TAGS for n in el.iter()):
            return BlockKind.MEDIA
        return BlockKind.FLOW

    def walk(self, el: Element) -> None:
        if el.tag in INVISIBLE_TAGS and not _is_math_script(el):
            return
        if not self.vis(el):
            return
        if el.tag == "table":
            if self.config.layout_table_split and is_layout_table(el):
                for cell in _table_cells(el):
                    if self.vis(cell):
                        self.emit(cell, BlockKind.FLOW)
                return
            self.emit(el, BlockKind.TABLE)
            return
        if el.tag in LIST_TAGS:
            self.emit(el, BlockKind.LIST)
            return
        if el.tag == "pre":
            self.emit(el, BlockKind.PRE)
            return
        # the body itself is never a block, only a container of blocks
        if el is not self.root and not self.has_block_desc(el):
            self.emit(el, self.leaf_kind(el))
            return
        run: list[Node] = []
        for child in el.children:
            if isinstance(child, Element) and (child.tag in BLOCK_TAGS or self.has_block_desc(child)):
                self.flush(run)
                run = []
                self.walk(child)
            else:
                run.append(child)
        self.flush(run)

    def flush(self, run: list[Node]) -> None:
        # trim whitespace-only/invisible edges so the run root is content
        while run and not self.vis(run[0]):
            run.pop(0)
        while run and not self.vis(run[-1]):
            run.pop()
        if not run:
            return
        if len(run) == 1 and isinstance(run[0], Element):
            self.emit(run[0], self.leaf_kind(run[0]))
            return
        kind = BlockKind.FLOW
        if all(isinstance(n, Element) and n.tag in MEDIA_TAGS for n in run if self.vis(n)):
            kind = BlockKind.MEDIA
        self.emit(run[0], kind, len(run))


def _table_rows(table: Element) -> list[Element]:
    rows = []
    for child in table.elements:
        if child.tag == "tr":
            rows.append(child)
        elif child.tag in ("thead", "tbody", "tfoot"):
            rows.extend(c for c in child.elements if c.tag == "tr")
    return rows


def _table_cells(table: Element) -> list[Element]:
    return [c for row in _table_rows(table) for c in row.elements if c.tag in ("td", "th")]


def is_layout_table(table: Element) -> bool:
    """Split predicate: no <th>, no <caption>, <=2 rows, some cell holds block children."""
    rows = _table_rows(table)
    if not rows or len(rows) > 2:
        return False
    if any(c.tag == "caption" for c in table.elements):
        return False
    cells = _table_cells(table)
    if any(c.tag == "th" for c in cells):
        return False
    return any(
        isinstance(d, Element) and d.tag in BLOCK_TAGS
        for cell in cells for d in cell.iter() if d is not cell
    )


def chunk_blocks(tree: DomTree, config: PreprocessConfig | None = None) -> list[Block]:
    """Split the body into maximal non-overlapping blocks in document order."""
    config = config or PreprocessConfig()
    body = tree.body
    if body is None:
        return []
    chunker = _Chunker(body, config)
    chunker.walk(body)
    return [
        Block(NodePath.of(node, tree.root), kind, i, extent)
        for i, (node, kind, extent) in enumerate(chunker.out, start=1)
    ]


def block_nodes(tree: DomTree, block: Block) -> list[Node]:
    first = tree.resolve(block.root_path)
    if block.extent == 1:
        return [first]
    parent = first.parent
    start = block.root_path.steps[-1]
    return parent.children[start:start + block.extent]


def block_text(tree: DomTree, block: Block) -> str:
    return visible_text(block_nodes(tree, block))


# ------------------------------------------------------------- truncation

def _normalize_ws(nodes: list[Node]) -> list[Node]:
    out: list[Node] = []
    for node in nodes:
        if isinstance(node, Text):
            data = _WS.sub(" ", node.data)
            if out and isinstance(out[-1], Text):
                out[-1].data = _WS.sub(" ", out[-1].data + data)
            elif data.strip():
                out.append(Text(data))
            elif out:
                out.append(Text(" "))
        else:
            node.children = _normalize_ws(node.children)
            for c in node.children:
                c.parent = node
            out.append(node)
    return out


def _unwrap_inline(nodes: list[Node]) -> list[Node]:
    out: list[Node] = []
    for node in nodes:
        if isinstance(node, Text):
            out.append(node)
            continue
        node.children = _unwrap_inline(node.children)
        for c in node.children:
            c.parent = node
        if node.tag in _SIMPLIFIED_KEEP:
            out.append(node)
        else:
            out.extend(node.children)
    return out


def _trim_text(nodes: list[Node], budget: int) -> tuple[list[Node], int, bool]:
    """Keep the first ``budget`` text characters; return (nodes, remaining, cut)."""
    out: list[Node] = []
    cut = False
    for node in nodes:
        if budget <= 0:
            if isinstance(node, Text):
                cut = cut or bool(node.data.strip())
            elif _has_visible(node):
                cut = True
            continue
        if isinstance(node, Text):
            if len(node.data) > budget:
                out.append(Text(node.data[:budget]))
                cut = True
                budget = 0
            else:
                out.append(node)
                budget -= len(node.data)
        else:
            node.children, budget, sub_cut = _trim_text(node.children, budget)
            for c in node.children:
                c.parent = node
            cut = cut or sub_cut
            out.append(node)
    return out, budget, cut


def _is_edge_junk(node: Node) -> bool:
    # whitespace, line breaks and empty elements at a block edge render as nothing
    if isinstance(node, Text):
        return not node.data.strip()
    return not _has_visible(node)


def _strip_edges(nodes: list[Node]) -> list[Node]:
    nodes = list(nodes)
    while nodes and (_is_edge_junk(nodes[0]) or isinstance(nodes[0], Text)):
        if isinstance(nodes[0], Text) and nodes[0].data.strip():
            nodes[0].data = nodes[0].data.lstrip()
            break
        nodes.pop(0)
    while nodes and (_is_edge_junk(nodes[-1]) or isinstance(nodes[-1], Text)):
        if isinstance(nodes[-1], Text) and nodes[-1].data.strip():
            nodes[-1].data = nodes[-1].data.rstrip()
            break
        nodes.pop()
    return nodes


def _truncate_nodes(nodes: list[Node], kind: BlockKind, config: PreprocessConfig) -> tuple[list[Node], bool]:
    limit = config.paragraph_truncation
    if kind is BlockKind.TABLE and len(nodes) == 1 and isinstance(nodes[0], Element) and nodes[0].tag == "table":
        table = nodes[0]
        cells = _table_cells(table)
        keep = cells[: config.table_cell_sample]
        keep_ids = {id(c) for c in keep}
        truncated = False
        for cell in keep:
            cell.children, _, cut = _trim_text(cell.children, limit)
            truncated = truncated or cut
        for row in _table_rows(table):
            row.children = [c for c in row.children
                            if not (isinstance(c, Element) and c.tag in ("td", "th")) or id(c) in keep_ids]
        for section in list(table.elements):
            if section.tag in ("thead", "tbody", "tfoot"):
                section.children = [r for r in section.children
                                    if not (isinstance(r, Element) and r.tag == "tr" and not r.elements)]
        table.children = [r for r in table.children
                          if not (isinstance(r, Element) and r.tag == "tr" and not r.elements)]
        dropped = len(cells) - len(keep)
        out: list[Node] = [table]
        if dropped:
            out.append(Text(f"…(+{dropped} cells)"))
        return out, truncated or dropped > 0
    if kind is BlockKind.LIST and len(nodes) == 1 and isinstance(nodes[0], Element) and nodes[0].tag in LIST_TAGS:
        lst = nodes[0]
        items = [c for c in lst.elements if c.tag in ("li", "dt", "dd")]
        keep = items[: config.list_item_sample]
        keep_ids = {id(c) for c in keep}
        truncated = False
        for item in keep:
            item.children, _, cut = _trim_text(item.children, limit)
            truncated = truncated or cut
        lst.children = [c for c in lst.children
                        if not (isinstance(c, Element) and c.tag in ("li", "dt", "dd")) or id(c) in keep_ids]
        dropped = len(items) - len(keep)
        out = [lst]
        if dropped:
            out.append(Text(f"…(+{dropped} items)"))
        return out, truncated or dropped > 0
    nodes, _, cut = _trim_text(nodes, limit)
    return nodes, cut


def truncate_block(block_text: str, kind: BlockKind | str, config: PreprocessConfig | None = None) -> tuple[str, bool]:
    """Reduce a simplified block fragment to its representative prefix.

    Flow and pre text is cut to ``paragraph_truncation`` characters; tables
    keep ``table_cell_sample`` cells and lists ``list_item_sample`` items,
    followed by a count marker for what was dropped.
    """
    config = config or PreprocessConfig()
    nodes = _strip_edges(_normalize_ws(parse_fragment(block_text)))
    nodes, truncated = _truncate_nodes(nodes, BlockKind(kind), config)
    return "".join(serialize_node(n) for n in nodes).strip(), truncated


# ----------------------------------------------------------------- driver

def _simplify_block(nodes: list[Node], kind: BlockKind, config: PreprocessConfig) -> tuple[str, bool]:
    keep = set(config.kept_attributes)
    work: list[Node] = []
    for node in nodes:
        if isinstance(node, Element):
            if node.tag in config.removed_tags:
                continue
            copy = _strip(node.copy(), config.removed_tags)
            for el in copy.iter_elements():
                el.attrs = [(k, v) for k, v in el.attrs if k in keep]
            work.append(copy)
        else:
            work.append(node.copy())
    work = _strip_edges(_normalize_ws(_unwrap_inline(work)))
    work, truncated = _truncate_nodes(work, kind, config)
    if not any(_has_visible(n) for n in work):
        # everything visible sat inside removed tags
        return "", truncated
    text = "".join(serialize_node(n) for n in work).strip()
    return text, truncated


def _removed_by_ancestor(node: Node, removed: frozenset[str]) -> bool:
    cur = node.parent
    while cur is not None:
        if cur.tag in removed:
            return True
        cur = cur.parent
    return False


def preprocess(tree: DomTree, config: PreprocessConfig | None = None, doc_id: str = "") -> tuple[SimplifiedSequence, MappingSequence]:
    config = config or PreprocessConfig()
    blocks = chunk_blocks(tree, config)
    if not blocks:
        raise EmptyDocument(f"document {doc_id!r} has no content blocks")
    simplified = []
    for block in blocks:
        nodes = block_nodes(tree, block)
        text, truncated = "", False
        if not _removed_by_ancestor(nodes[0], config.removed_tags):
            text, truncated = _simplify_block(nodes, block.kind, config)
        if not text:
            text = EMPTY_PLACEHOLDER
        simplified.append(SimplifiedBlock(block.source_order, text, block.kind, truncated))
    return SimplifiedSequence(simplified, doc_id), MappingSequence(blocks, doc_id)
