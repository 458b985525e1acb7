"""Single-document extraction: preprocess -> label -> project -> format."""

from __future__ import annotations

from dataclasses import dataclass

from .dom import DomTree, parse_html
from .fsm import LabelSequence
from .labeling import Labeler, labels_from_marker
from .postprocess import MainHtml, project_labels
from .preprocess import MappingSequence, PreprocessConfig, SimplifiedSequence, preprocess

__all__ = ["Extraction", "extract_main", "extract_with_marker", "strip_attribute"]


@dataclass
class Extraction:
    main: MainHtml
    simplified: SimplifiedSequence
    mapping: MappingSequence
    labels: LabelSequence


def extract_main(tree: DomTree, labeler: Labeler, config: PreprocessConfig | None = None, doc_id: str = "") -> Extraction:
    simplified, mapping = preprocess(tree, config, doc_id)
    labels = labeler.label(simplified)
    main = project_labels(mapping, labels, tree)
    if labels.meta.get("fallback"):
        main.flags["labeler_fallback"] = True
    return Extraction(main, simplified, mapping, labels)


def strip_attribute(tree: DomTree, attr: str) -> DomTree:
    out = tree.copy()
    for el in out.root.iter_elements():
        if el.has(attr):
            el.attrs = [(k, v) for k, v in el.attrs if k != attr]
    return out


def extract_with_marker(html: str | bytes | DomTree, config: PreprocessConfig | None = None, doc_id: str = "", attr: str = "cc-select") -> Extraction:
    """Oracle path: labels come from annotation markers, which never reach the output."""
    marked = html if isinstance(html, DomTree) else parse_html(html)
    clean = strip_attribute(marked, attr)
    simplified, mapping = preprocess(clean, config, doc_id)
    labels = labels_from_marker(marked, mapping, attr)
    return Extraction(project_labels(mapping, labels, clean), simplified, mapping, labels)
