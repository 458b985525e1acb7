"""DOM model, tolerant HTML parsing, serialization and subtree containment.

Parsing is delegated to html5lib (spec-conformant tree construction with
tag-soup recovery); the resulting ElementTree is converted into the small
``Element``/``Text`` model used everywhere else so nodes can carry parent
pointers and be addressed by child-index paths.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union
import xml.etree.ElementTree as ET

import html5lib

__all__ = [
    "Element",
    "Text",
    "Node",
    "DomTree",
    "NodePath",
    "ContainmentReport",
    "UndecodableInput",
    "PathError",
    "parse_html",
    "decode_html",
    "parse_fragment",
    "serialize",
    "serialize_node",
    "tree_equal",
    "is_subtree",
    "collapse_ws",
    "text_content",
    "visible_text",
    "BLOCK_TAGS",
]

VOID_TAGS = frozenset(
    "area base br col embed hr img input link meta param source track wbr".split()
)
RAW_TEXT_TAGS = frozenset("script style xmp iframe noembed noframes plaintext noscript".split())
ESCAPABLE_RAW_TAGS = frozenset({"textarea", "title"})
NEWLINE_SENSITIVE = frozenset({"pre", "textarea", "listing"})
INVISIBLE_TAGS = frozenset({"script", "style", "template", "head", "title", "noscript", "meta", "link"})
BLOCK_TAGS = frozenset(
    """address article aside blockquote body center dd details dialog dir div dl dt
    fieldset figcaption figure footer form h1 h2 h3 h4 h5 h6 header hgroup hr html li
    main menu nav ol p pre section summary table tbody thead tfoot tr td th caption ul
    noscript legend""".split()
)

_WS = re.compile(r"\s+")
_META_CHARSET = re.compile(rb"""<meta[^>]+charset\s*=\s*["']?\s*([A-Za-z0-9_\-:.]+)""", re.I)


class UndecodableInput(ValueError):
    pass


class PathError(LookupError):
    pass


class Text:
    __slots__ = ("data", "parent")

    def __init__(self, data: str, parent: Element | None = None):
        self.data = data
        self.parent = parent

    @property
    def tag(self) -> None:
        return None

    def copy(self) -> Text:
        return Text(self.data)

    def __repr__(self) -> str:
        return f"Text({self.data!r})"


class Element:
    __slots__ = ("tag", "attrs", "children", "parent")

    def __init__(self, tag: str, attrs: Sequence[tuple[str, str]] | None = None, children=None):
        self.tag = tag
        self.attrs: list[tuple[str, str]] = list(attrs or [])
        self.children: list[Node] = []
        self.parent: Element | None = None
        for child in children or ():
            self.append(child)

    def append(self, child: Node) -> Node:
        child.parent = self
        self.children.append(child)
        return child

    def get(self, name: str, default: str | None = None) -> str | None:
        for k, v in self.attrs:
            if k == name:
                return v
        return default

    def has(self, name: str) -> bool:
        return any(k == name for k, _ in self.attrs)

    @property
    def classes(self) -> list[str]:
        return (self.get("class") or "").split()

    @property
    def elements(self) -> list[Element]:
        return [c for c in self.children if isinstance(c, Element)]

    def copy(self, deep: bool = True) -> Element:
        new = Element(self.tag, self.attrs)
        if deep:
            for child in self.children:
                new.append(child.copy())
        return new

    def iter(self) -> Iterator[Node]:
        """Pre-order traversal including text nodes."""
        stack: list[Node] = [self]
        while stack:
            node = stack.pop()
            yield node
            if isinstance(node, Element):
                stack.extend(reversed(node.children))

    def iter_elements(self) -> Iterator[Element]:
        for node in self.iter():
            if isinstance(node, Element):
                yield node

    def find_all(self, *tags: str) -> list[Element]:
        wanted = set(tags)
        return [e for e in self.iter_elements() if e.tag in wanted]

    def __repr__(self) -> str:
        return f"<Element {self.tag} attrs={len(self.attrs)} children={len(self.children)}>"


Node = Union[Element, Text]


@dataclass(frozen=True)
class NodePath:
    steps: tuple[int, ...] = ()

    def resolve(self, root: Element) -> Node:
        node: Node = root
        for depth, idx in enumerate(self.steps):
            if not isinstance(node, Element) or not 0 <= idx < len(node.children):
                raise PathError(f"step {depth} (index {idx}) out of range in {self}")
            node = node.children[idx]
        return node

    def child(self, idx: int) -> NodePath:
        return NodePath(self.steps + (idx,))

    @property
    def parent(self) -> NodePath:
        return NodePath(self.steps[:-1])

    @classmethod
    def of(cls, node: Node, root: Element) -> NodePath:
        steps = []
        while node is not root:
            parent = node.parent
            if parent is None:
                raise PathError("node is not a descendant of root")
            steps.append(_index_in(parent, node))
            node = parent
        return cls(tuple(reversed(steps)))

    def __str__(self) -> str:
        return "/" + "/".join(map(str, self.steps))


def _index_in(parent: Element, node: Node) -> int:
    for i, c in enumerate(parent.children):
        if c is node:
            return i
    raise PathError("broken parent link")


@dataclass
class DomTree:
    root: Element

    @property
    def body(self) -> Element | None:
        for child in self.root.elements:
            if child.tag == "body":
                return child
        return None

    @property
    def head(self) -> Element | None:
        for child in self.root.elements:
            if child.tag == "head":
                return child
        return None

    def copy(self) -> DomTree:
        return DomTree(self.root.copy())

    def resolve(self, path: NodePath) -> Node:
        return path.resolve(self.root)

    def path_of(self, node: Node) -> NodePath:
        return NodePath.of(node, self.root)


# ---------------------------------------------------------------- parsing

def decode_html(data: bytes, encoding_hint: str | None = None) -> str:
    """Hint, then <meta charset>, then UTF-8 with replacement."""
    candidates = []
    if encoding_hint:
        candidates.append(encoding_hint)
    m = _META_CHARSET.search(data[:4096])
    if m:
        candidates.append(m.group(1).decode("ascii", "ignore"))
    candidates.append("utf-8")
    for enc in candidates:
        try:
            return data.decode(enc)
        except (LookupError, UnicodeDecodeError):
            continue
    return data.decode("utf-8", errors="replace")


def _local(name: str) -> str:
    if name.startswith("{"):
        ns, _, local = name[1:].partition("}")
        if ns.endswith("xlink"):
            return "xlink:" + local
        if ns.endswith("XML/1998/namespace"):
            return "xml:" + local
        return local
    return name


def _convert(el: ET.Element) -> Element:
    node = Element(_local(el.tag).lower(), [(_local(k), v) for k, v in el.attrib.items()])
    if el.text:
        node.append(Text(el.text))
    for child in el:
        if isinstance(child.tag, str):
            node.append(_convert(child))
        if child.tail:
            last = node.children[-1] if node.children else None
            if isinstance(last, Text):
                last.data += child.tail
            else:
                node.append(Text(child.tail))
    return node


def parse_html(data: bytes | str, encoding_hint: str | None = None) -> DomTree:
    """Parse a (possibly malformed) HTML document into a DomTree.

    Encoding resolution order: ``encoding_hint``, ``<meta charset>``, UTF-8,
    then UTF-8 with replacement characters.
    """
    if isinstance(data, bytes):
        if not data:
            raise UndecodableInput("empty input")
        text = decode_html(data, encoding_hint)
    else:
        text = data
    if not text.strip():
        raise UndecodableInput("empty input")
    root = _convert(html5lib.parse(text, treebuilder="etree", namespaceHTMLElements=False))
    # html5lib always synthesizes <head>; an empty one carries no information.
    root.children = [
        c for c in root.children
        if not (isinstance(c, Element) and c.tag == "head" and not c.children and not c.attrs)
    ]
    return DomTree(root)


def parse_fragment(text: str) -> list[Node]:
    frag = html5lib.parseFragment(text, treebuilder="etree", namespaceHTMLElements=False)
    holder = _convert(frag)
    nodes = list(holder.children)
    for n in nodes:
        n.parent = None
    return nodes


# ---------------------------------------------------------- serialization

def _escape_text(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace("\xa0", "&nbsp;")


def _escape_attr(s: str) -> str:
    return s.replace("&", "&amp;").replace('"', "&quot;").replace("\xa0", "&nbsp;")


def _serialize_into(node: Node, out: list[str], raw: bool = False, escapable_raw: bool = False) -> None:
    if isinstance(node, Text):
        if raw:
            out.append(node.data)
        elif escapable_raw:
            out.append(node.data.replace("&", "&amp;").replace("<", "&lt;"))
        else:
            out.append(_escape_text(node.data))
        return
    out.append("<" + node.tag)
    for k, v in node.attrs:
        out.append(f' {k}="{_escape_attr(v)}"')
    out.append(">")
    if node.tag in VOID_TAGS:
        return
    if node.tag in NEWLINE_SENSITIVE and node.children:
        first = node.children[0]
        if isinstance(first, Text) and first.data.startswith("\n"):
            out.append("\n")
    child_raw = node.tag in RAW_TEXT_TAGS
    child_esc = node.tag in ESCAPABLE_RAW_TAGS
    for child in node.children:
        _serialize_into(child, out, child_raw, child_esc)
    out.append(f"</{node.tag}>")


def serialize_node(node: Node) -> str:
    out: list[str] = []
    _serialize_into(node, out)
    return "".join(out)


def serialize(tree: DomTree | Element) -> str:
    """Serialize a tree to HTML text; attributes keep their stored order."""
    root = tree.root if isinstance(tree, DomTree) else tree
    return serialize_node(root)


# --------------------------------------------------------------- helpers

def collapse_ws(s: str) -> str:
    return _WS.sub(" ", s).strip()


def text_content(node: Node) -> str:
    if isinstance(node, Text):
        return node.data
    return "".join(n.data for n in node.iter() if isinstance(n, Text))


def visible_text(node: Node | Sequence[Node]) -> str:
    """Text a browser would render, whitespace-collapsed.

    Inline markup joins its text directly; block boundaries and ``<br>``
    act as a single space.  A sequence of siblings renders as a run.
    """
    parts: list[str] = []

    def walk(n: Node) -> None:
        if isinstance(n, Text):
            parts.append(n.data)
            return
        if n.tag in INVISIBLE_TAGS:
            return
        if n.tag == "br":
            parts.append(" ")
            return
        block = n.tag in BLOCK_TAGS
        if block:
            parts.append(" ")
        for c in n.children:
            walk(c)
        if block:
            parts.append(" ")

    for n in ([node] if isinstance(node, (Text, Element)) else node):
        walk(n)
    return collapse_ws("".join(parts))


def _norm_attrs(el: Element) -> list[tuple[str, str]]:
    out = []
    for k, v in el.attrs:
        if v == "" or v.lower() == k.lower():
            v = k
        out.append((k, v))
    return sorted(out)


def tree_equal(a: Node, b: Node) -> bool:
    """Structural equality: tag names, attribute multiset, text, child order."""
    if isinstance(a, Text) or isinstance(b, Text):
        return isinstance(a, Text) and isinstance(b, Text) and a.data == b.data
    if a.tag != b.tag or sorted(a.attrs) != sorted(b.attrs):
        return False
    if len(a.children) != len(b.children):
        return False
    return all(tree_equal(x, y) for x, y in zip(a.children, b.children))


# ------------------------------------------------------ subtree checking

@dataclass
class ContainmentReport:
    ok: bool
    violations: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


_MAX_VIOLATIONS = 10


class _Matcher:
    def __init__(self) -> None:
        self.memo: dict[tuple[int, int], bool] = {}

    def element_matches(self, c: Element, o: Element) -> bool:
        key = (id(c), id(o))
        hit = self.memo.get(key)
        if hit is None:
            hit = (
                c.tag == o.tag
                and _norm_attrs(c) == _norm_attrs(o)
                and not self.children_embed(c, o, None, ())
            )
            self.memo[key] = hit
        return hit

    def children_embed(self, c: Element, o: Element, sink: list[str] | None, path: tuple[int, ...]) -> list[str]:
        """Embed c's children into o's children in order; return violation paths."""
        violations: list[str] = []
        ochildren = o.children
        j = 0
        for i, cc in enumerate(c.children):
            cpath = path + (i,)
            if isinstance(cc, Text):
                if not cc.data.strip():
                    continue
                k = self._match_text(cc.data, ochildren, j)
                if k is None:
                    violations.append(str(NodePath(cpath)))
                    if sink is None:
                        return violations
                    continue
                j = k
                continue
            found = None
            for k in range(j, len(ochildren)):
                oc = ochildren[k]
                if isinstance(oc, Element) and self.element_matches(cc, oc):
                    found = k
                    break
            if found is None:
                if sink is None:
                    violations.append(str(NodePath(cpath)))
                    return violations
                # diagnose deeper when a same-tag candidate exists
                deeper = None
                for k in range(j, len(ochildren)):
                    oc = ochildren[k]
                    if isinstance(oc, Element) and oc.tag == cc.tag and _norm_attrs(oc) == _norm_attrs(cc):
                        deeper = self.children_embed(cc, oc, sink, cpath)
                        if deeper:
                            j = k + 1
                        break
                violations.extend(deeper or [str(NodePath(cpath))])
                continue
            j = found + 1
        return violations

    @staticmethod
    def _match_text(text: str, ochildren: list[Node], start: int) -> int | None:
        target = collapse_ws(text)
        squeezed = "".join(text.split())
        for k in range(start, len(ochildren)):
            oc = ochildren[k]
            if not isinstance(oc, Text):
                continue
            if collapse_ws(oc.data) == target:
                return k + 1
            # candidate text may be the merge of several original text
            # nodes whose separating elements were pruned
            acc = ""
            for m in range(k, len(ochildren)):
                om = ochildren[m]
                if not isinstance(om, Text):
                    continue
                acc += "".join(om.data.split())
                if acc == squeezed:
                    return m + 1
                if not squeezed.startswith(acc):
                    break
        return None


def is_subtree(candidate: DomTree | Element, original: DomTree | Element) -> ContainmentReport:
    """Check that ``candidate`` embeds into ``original``.

    Element nodes must map injectively onto original elements with equal tag
    and attributes, preserving parent/child links and document order; text
    payloads are compared whitespace-collapsed.
    """
    c = candidate.root if isinstance(candidate, DomTree) else candidate
    o = original.root if isinstance(original, DomTree) else original
    if c.tag != o.tag or _norm_attrs(c) != _norm_attrs(o):
        return ContainmentReport(False, ["/"])
    matcher = _Matcher()
    violations = matcher.children_embed(c, o, [], ())
    return ContainmentReport(not violations, violations[:_MAX_VIOLATIONS])
