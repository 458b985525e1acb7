"""Table classification and pipe-table rendering."""

from __future__ import annotations

from ..dom import Element

__all__ = ["table_rows", "row_cells", "has_nested_table", "is_simple_table", "pipe_table", "parse_pipe_table", "escape_cell"]


def table_rows(table: Element) -> list[Element]:
    """Rows in document order, looking through thead/tbody/tfoot but not nested tables."""
    rows = []
    for child in table.children:
        if not isinstance(child, Element):
            continue
        if child.tag == "tr":
            rows.append(child)
        elif child.tag in ("thead", "tbody", "tfoot"):
            rows.extend(c for c in child.children if isinstance(c, Element) and c.tag == "tr")
    return rows


def row_cells(row: Element) -> list[Element]:
    return [c for c in row.children if isinstance(c, Element) and c.tag in ("td", "th")]


def has_nested_table(table: Element) -> bool:
    return any(el is not table and el.tag == "table" for el in table.iter_elements())


def _span(cell: Element, attr: str) -> int:
    try:
        return int((cell.get(attr) or "1").strip() or 1)
    except ValueError:
        return 1


def is_header_row(row: Element) -> bool:
    cells = row_cells(row)
    in_thead = row.parent is not None and row.parent.tag == "thead"
    return bool(cells) and (in_thead or all(c.tag == "th" for c in cells))


def is_simple_table(table: Element) -> bool:
    if has_nested_table(table):
        return False
    rows = table_rows(table)
    for row in rows:
        for cell in row_cells(row):
            if _span(cell, "colspan") > 1 or _span(cell, "rowspan") > 1:
                return False
    return sum(1 for r in rows if is_header_row(r)) <= 1


def escape_cell(text: str) -> str:
    return text.replace("\\", "\\\\").replace("|", "\\|").replace("\n", " ")


def pipe_table(grid: list[list[str]]) -> str:
    """Render a cell grid; the first row becomes the header."""
    width = max(len(r) for r in grid)
    padded = [[escape_cell(c) for c in r] + [""] * (width - len(r)) for r in grid]
    lines = ["| " + " | ".join(padded[0]) + " |", "| " + " | ".join(["---"] * width) + " |"]
    lines += ["| " + " | ".join(r) + " |" for r in padded[1:]]
    return "\n".join(lines)


def _split_row(line: str) -> list[str]:
    body = line.strip()
    if body.startswith("|"):
        body = body[1:]
    if body.endswith("|") and not body.endswith("\\|"):
        body = body[:-1]
    cells, cur, i = [], [], 0
    while i < len(body):
        ch = body[i]
        if ch == "\\" and i + 1 < len(body):
            cur.append(body[i + 1])
            i += 2
            continue
        if ch == "|":
            cells.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
        i += 1
    cells.append("".join(cur).strip())
    return cells


def parse_pipe_table(text: str) -> list[list[str]]:
    """Inverse of ``pipe_table`` (delimiter row dropped, escapes undone)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise ValueError("pipe table needs a header and a delimiter row")
    return [_split_row(ln) for i, ln in enumerate(lines) if i != 1]
