"""Main-HTML to typed content list, Markdown and plain text."""

from .code import guess_language
from .convert import to_content_list
from .formula import FormulaError, mathml_to_latex
from .items import ITEM_TYPES, ContentItem, ContentList
from .render import content_list_to_markdown, item_to_markdown, main_html_to_plain_text
from .tables import parse_pipe_table, pipe_table

__all__ = [
    "ContentItem",
    "ContentList",
    "ITEM_TYPES",
    "FormulaError",
    "to_content_list",
    "content_list_to_markdown",
    "item_to_markdown",
    "main_html_to_plain_text",
    "guess_language",
    "mathml_to_latex",
    "pipe_table",
    "parse_pipe_table",
]
