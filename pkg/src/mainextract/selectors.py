"""A small XPath 1.0 subset evaluated over ``dom.Element`` trees.

Supported: absolute location paths built from ``/`` (child) and ``//``
(descendant-or-self) steps; node tests ``name``, ``*``, ``text()`` and
``node()``; predicates ``[@attr="value"]`` and ``[n]`` (1-based position
among the step's matches under the same parent).  This is exactly the
language emitted by rule synthesis.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from .dom import Element, Node, Text

__all__ = ["SelectorError", "Selector", "compile_selector", "select", "xpath_literal"]


class SelectorError(ValueError):
    pass


@dataclass(frozen=True)
class _Step:
    descendant: bool
    test: str  # tag name, "*", "text()" or "node()"
    attr: tuple[str, str] | None
    position: int | None


_STEP_RE = re.compile(
    r"""(?P<sep>//|/)
        (?P<test>text\(\)|node\(\)|\*|[A-Za-z][A-Za-z0-9_:\-]*)
        (?P<preds>(?:\[(?:@[A-Za-z_][A-Za-z0-9_:\-]*=(?:"[^"]*"|'[^']*')|\d+)\])*)""",
    re.X,
)
_PRED_RE = re.compile(r"""\[(?:@(?P<name>[A-Za-z_][A-Za-z0-9_:\-]*)=(?:"(?P<dq>[^"]*)"|'(?P<sq>[^']*)')|(?P<pos>\d+))\]""")


def xpath_literal(value: str) -> str:
    if '"' not in value:
        return f'"{value}"'
    if "'" not in value:
        return f"'{value}'"
    raise SelectorError("attribute value mixes both quote characters")


@dataclass(frozen=True)
class Selector:
    source: str
    steps: tuple[_Step, ...]

    def select(self, root: Element) -> list[Node]:
        # the context is a virtual document node whose only child is root
        current: list[Node] = [_DocumentNode(root)]
        for step in self.steps:
            current = _apply_step(current, step)
        return current


class _DocumentNode:
    __slots__ = ("children", "tag")

    def __init__(self, root: Element):
        self.children = [root]
        self.tag = "#document"


def _matches(node: Node, step: _Step) -> bool:
    if step.test == "node()":
        ok = True
    elif step.test == "text()":
        ok = isinstance(node, Text)
    elif isinstance(node, Text):
        ok = False
    else:
        ok = step.test == "*" or node.tag == step.test
    if ok and step.attr is not None:
        ok = isinstance(node, Element) and node.get(step.attr[0]) == step.attr[1]
    return ok


def _descendants_or_self(node) -> list:
    out = []
    stack = [node]
    while stack:
        cur = stack.pop()
        out.append(cur)
        if not isinstance(cur, Text):
            stack.extend(reversed(cur.children))
    return out


def _apply_step(context: list, step: _Step) -> list[Node]:
    parents = []
    if step.descendant:
        seen = set()
        for node in context:
            for d in _descendants_or_self(node):
                if id(d) not in seen and not isinstance(d, Text):
                    seen.add(id(d))
                    parents.append(d)
    else:
        parents = [n for n in context if not isinstance(n, Text)]
    out: list[Node] = []
    seen_out: set[int] = set()
    for parent in parents:
        hits = [c for c in parent.children if _matches(c, step)]
        if step.position is not None:
            hits = hits[step.position - 1: step.position] if step.position >= 1 else []
        for h in hits:
            if id(h) not in seen_out:
                seen_out.add(id(h))
                out.append(h)
    return out


@lru_cache(maxsize=4096)
def compile_selector(source: str) -> Selector:
    pos = 0
    steps = []
    while pos < len(source):
        m = _STEP_RE.match(source, pos)
        if not m:
            raise SelectorError(f"cannot parse selector {source!r} at offset {pos}")
        attr = position = None
        for pm in _PRED_RE.finditer(m.group("preds")):
            if pm.group("pos"):
                position = int(pm.group("pos"))
            else:
                value = pm.group("dq") if pm.group("dq") is not None else pm.group("sq")
                attr = (pm.group("name"), value)
        steps.append(_Step(m.group("sep") == "//", m.group("test"), attr, position))
        pos = m.end()
    if not steps:
        raise SelectorError(f"empty selector {source!r}")
    return Selector(source, tuple(steps))


def select(source: str, root: Element) -> list[Node]:
    return compile_selector(source).select(root)
