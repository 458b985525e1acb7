"""Project block labels back onto the original tree and assemble Main-HTML."""

from __future__ import annotations

from dataclasses import dataclass, field

from .dom import ContainmentReport, DomTree, Element, Node, NodePath, is_subtree, visible_text
from .fsm import Label, LabelSequence, LengthMismatch
from .preprocess import MappingSequence, block_nodes, block_text

__all__ = ["MainHtml", "project_labels", "project_kept", "validate_main_html"]


@dataclass
class MainHtml:
    tree: DomTree
    source_doc_id: str = ""
    kept_block_indices: list[int] = field(default_factory=list)
    # where each kept block landed in ``tree``; parallel to kept_block_indices
    kept_paths: list[tuple[NodePath, int]] = field(default_factory=list)
    flags: dict = field(default_factory=dict)

    @property
    def empty(self) -> bool:
        return not self.kept_block_indices


def project_kept(original: DomTree, mapping: MappingSequence, keep: list[bool]) -> MainHtml:
    """Rebuild html>body>... keeping only selected blocks under copies of their ancestors."""
    root = original.root
    new_root = Element(root.tag, root.attrs)
    copies: dict[int, Element] = {id(root): new_root}

    def materialize(el: Element) -> Element:
        hit = copies.get(id(el))
        if hit is not None:
            return hit
        parent_copy = materialize(el.parent)
        copy = parent_copy.append(Element(el.tag, el.attrs))
        copies[id(el)] = copy
        return copy

    body = original.body
    if body is not None:
        materialize(body)

    kept_indices, kept_paths = [], []
    for block, flag in zip(mapping.blocks, keep):
        if not flag:
            continue
        nodes = block_nodes(original, block)
        parent_copy = materialize(nodes[0].parent)
        start = len(parent_copy.children)
        for node in nodes:
            parent_copy.append(node.copy())
        kept_indices.append(block.source_order)
        kept_paths.append((NodePath.of(parent_copy, new_root).child(start), len(nodes)))

    main = MainHtml(DomTree(new_root), mapping.doc_id, kept_indices, kept_paths)
    if not kept_indices:
        main.flags["empty"] = True
    return main


def project_labels(mapping: MappingSequence, labels: LabelSequence, original: DomTree) -> MainHtml:
    if len(mapping) != len(labels):
        raise LengthMismatch(f"{len(labels)} labels for {len(mapping)} blocks")
    return project_kept(original, mapping, [label is Label.MAIN for label in labels])


def _landed_text(main: MainHtml, path: NodePath, extent: int) -> str:
    first = main.tree.resolve(path)
    if extent == 1:
        nodes: list[Node] = [first]
    else:
        start = path.steps[-1]
        nodes = first.parent.children[start:start + extent]
    return visible_text(nodes)


def validate_main_html(main: MainHtml, original: DomTree, mapping: MappingSequence | None = None) -> ContainmentReport:
    """Subtree containment plus per-block text equality against the original."""
    report = is_subtree(main.tree, original)
    violations = list(report.violations)
    if mapping is not None:
        by_order = {b.source_order: b for b in mapping.blocks}
        for idx, (path, extent) in zip(main.kept_block_indices, main.kept_paths):
            block = by_order.get(idx)
            try:
                landed = _landed_text(main, path, extent)
            except LookupError:
                violations.append(f"block {idx}: path {path} missing")
                continue
            if block is None or landed != block_text(original, block):
                violations.append(f"block {idx}: text differs from original")
    return ContainmentReport(not violations, violations[:10])
