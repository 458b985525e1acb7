"""Main-content extraction from raw HTML by block sequence labeling.

Pipeline: parse -> chunk into blocks -> label each block main/other ->
project kept blocks back onto the original DOM -> format as a typed content
list, Markdown or plain text.  ``mainextract.evalkit`` holds the metrics and
benchmark harness; ``mainextract.template`` propagates labeling decisions
across pages that share a layout.
"""

from .dom import DomTree, parse_html, serialize
from .fsm import Label, LabelSequence
from .formatter import ContentItem, ContentList, content_list_to_markdown, main_html_to_plain_text, to_content_list
from .labeling import HeuristicLabeler, LabelerConfig, OracleLabeler, RemoteLabeler, make_labeler
from .pipeline import Extraction, extract_main, extract_with_marker
from .postprocess import MainHtml, project_labels, validate_main_html
from .preprocess import PreprocessConfig, preprocess

__version__ = "0.1.0"

__all__ = [
    "DomTree",
    "parse_html",
    "serialize",
    "Label",
    "LabelSequence",
    "ContentItem",
    "ContentList",
    "to_content_list",
    "content_list_to_markdown",
    "main_html_to_plain_text",
    "LabelerConfig",
    "HeuristicLabeler",
    "RemoteLabeler",
    "OracleLabeler",
    "make_labeler",
    "Extraction",
    "extract_main",
    "extract_with_marker",
    "MainHtml",
    "project_labels",
    "validate_main_html",
    "PreprocessConfig",
    "preprocess",
]
