"""Formula recognition across renderers, plus a small MathML to LaTeX converter."""

from __future__ import annotations

import re

from ..dom import Element, Node, Text, text_content

__all__ = ["FormulaError", "formula_source", "is_formula_element", "is_render_artifact", "mathml_to_latex", "split_raw_tex"]


class FormulaError(ValueError):
    pass


_ARTIFACT_CLASSES = frozenset({"mathjax_preview", "mathjax", "mathjax_display", "mathjax_svg", "mathjax_chtml", "mjx_assistive_mathml", "katex-html"})

_MO = {
    "∑": r"\sum", "∏": r"\prod", "∫": r"\int", "∮": r"\oint", "×": r"\times", "÷": r"\div", "·": r"\cdot",
    "⋅": r"\cdot", "±": r"\pm", "∓": r"\mp", "≤": r"\leq", "≥": r"\geq", "≠": r"\neq", "≈": r"\approx",
    "≡": r"\equiv", "∼": r"\sim", "∝": r"\propto", "→": r"\to", "←": r"\leftarrow", "⇒": r"\Rightarrow",
    "⇔": r"\Leftrightarrow", "↦": r"\mapsto", "∞": r"\infty", "∂": r"\partial", "∇": r"\nabla",
    "∈": r"\in", "∉": r"\notin", "⊂": r"\subset", "⊆": r"\subseteq", "∪": r"\cup", "∩": r"\cap",
    "∀": r"\forall", "∃": r"\exists", "¬": r"\neg", "∧": r"\wedge", "∨": r"\vee", "∅": r"\emptyset",
    "…": r"\ldots", "⋯": r"\cdots", "−": "-", "∘": r"\circ", "⟨": r"\langle", "⟩": r"\rangle",
    "⁡": "", "⁢": "", "⁣": "",
}
_GREEK = dict(zip(
    "αβγδεζηθικλμνξπρστυφχψωΓΔΘΛΞΠΣΦΨΩϵϕ",
    r"\alpha \beta \gamma \delta \epsilon \zeta \eta \theta \iota \kappa \lambda \mu \nu \xi \pi \rho \sigma \tau "
    r"\upsilon \phi \chi \psi \omega \Gamma \Delta \Theta \Lambda \Xi \Pi \Sigma \Phi \Psi \Omega \epsilon \phi".split(),
))
_ACCENTS = {"^": r"\hat", "¯": r"\bar", "‾": r"\overline", "→": r"\vec", "~": r"\tilde", "˙": r"\dot", "¨": r"\ddot"}
_NAMED_FUNCS = frozenset("sin cos tan log ln exp lim max min det sup inf arg deg dim gcd ker sec csc cot sinh cosh tanh".split())


def _classes(el: Element) -> set[str]:
    return set((el.get("class") or "").lower().split())


def is_render_artifact(el: Element) -> bool:
    """Rendered math whose source is carried by a sibling script or annotation."""
    if _classes(el) & _ARTIFACT_CLASSES:
        return True
    return el.tag.startswith("mjx-") and el.tag not in ("mjx-container", "mjx-assistive-mml")


def _is_math_script(el: Element) -> bool:
    return el.tag == "script" and (el.get("type") or "").lower().startswith("math/tex")


def _katex_annotation(el: Element) -> Element | None:
    for node in el.iter_elements():
        if node.tag == "annotation" and (node.get("encoding") or "").lower() == "application/x-tex":
            return node
    return None


def is_formula_element(el: Element) -> bool:
    if _is_math_script(el) or el.tag == "math":
        return True
    classes = _classes(el)
    if classes & {"katex", "katex-display", "katex-block"}:
        return True
    if el.tag == "mjx-container":
        return True
    return bool(classes & {"math", "arithmatex"}) and bool(_DELIMITED.fullmatch(text_content(el).strip()))


_DELIMITED = re.compile(r"(\$\$)(.+?)\$\$|(\\\[)(.+?)\\\]|(\$)([^$]+?)\$|(\\\()(.+?)\\\)", re.S)


def formula_source(el: Element) -> tuple[str, str]:
    """(latex, mode) for a formula element; raises FormulaError if unusable."""
    if _is_math_script(el):
        mode = "display" if "mode=display" in (el.get("type") or "").replace(" ", "").lower() else "inline"
        latex = text_content(el).strip()
        if not latex:
            raise FormulaError("empty math script")
        return latex, mode
    classes = _classes(el)
    if classes & {"katex", "katex-display", "katex-block"}:
        ann = _katex_annotation(el)
        if ann is None:
            raise FormulaError("KaTeX markup without a TeX annotation")
        display = bool(classes & {"katex-display", "katex-block"}) or _has_ancestor_class(el, "katex-display")
        return text_content(ann).strip(), "display" if display else "inline"
    math = el if el.tag == "math" else next((n for n in el.iter_elements() if n.tag == "math"), None)
    if math is not None:
        ann = _katex_annotation(math)
        latex = text_content(ann).strip() if ann is not None else mathml_to_latex(math)
        display = math.get("display") == "block" or el.get("display") == "true" or (el.get("display") == "block")
        return latex, "display" if display else "inline"
    m = _DELIMITED.fullmatch(text_content(el).strip())
    if m:
        return split_match(m)
    raise FormulaError(f"no formula source in <{el.tag}>")


def _has_ancestor_class(el: Element, name: str) -> bool:
    cur = el.parent
    while cur is not None:
        if name in _classes(cur):
            return True
        cur = cur.parent
    return False


def split_match(m: re.Match) -> tuple[str, str]:
    if m.group(1) or m.group(3):
        return (m.group(2) if m.group(1) else m.group(4)).strip(), "display"
    return (m.group(6) if m.group(5) else m.group(8)).strip(), "inline"


def split_raw_tex(text: str) -> list[tuple[str, str | None]]:
    """Split text into (segment, mode) pieces; mode is None for plain text."""
    out: list[tuple[str, str | None]] = []
    pos = 0
    for m in _DELIMITED.finditer(text):
        if m.start() > pos:
            out.append((text[pos:m.start()], None))
        latex, mode = split_match(m)
        out.append((latex, mode))
        pos = m.end()
    if pos < len(text):
        out.append((text[pos:], None))
    return out


# ------------------------------------------------------------------ MathML

def _kids(el: Element) -> list[Element]:
    return [c for c in el.children if isinstance(c, Element)]


def _group(s: str) -> str:
    return s if len(s) == 1 else "{" + s + "}"


def _token(text: str) -> str:
    text = text.strip()
    if text in _MO:
        return _MO[text]
    if text in _GREEK:
        return _GREEK[text]
    if text in _NAMED_FUNCS:
        return "\\" + text
    return "".join(_MO.get(ch, _GREEK.get(ch, ch)) for ch in text)


def _join(parts: list[str]) -> str:
    out = ""
    for p in parts:
        if not p:
            continue
        # a control word must not run into a following letter
        if re.search(r"\\[A-Za-z]+$", out) and p[:1].isalpha():
            out += " "
        out += p
    return out


def _conv(el: Node) -> str:
    if isinstance(el, Text):
        return _token(el.data) if el.data.strip() else ""
    tag = el.tag
    kids = _kids(el)
    if tag in ("math", "mrow", "mstyle", "mpadded", "mphantom", "menclose", "merror", "mtd"):
        return _join([_conv(k) for k in kids])
    if tag == "semantics":
        return _conv(kids[0]) if kids else ""
    if tag in ("mi", "mn", "mo"):
        return _token(text_content(el))
    if tag in ("mtext", "ms"):
        t = text_content(el)
        return r"\text{" + t + "}" if t.strip() else ""
    if tag == "mspace":
        return r"\,"
    if tag in ("annotation", "annotation-xml", "none", "mprescripts"):
        return ""
    arity = {"msup": 2, "msub": 2, "mfrac": 2, "mroot": 2, "mover": 2, "munder": 2, "msubsup": 3, "munderover": 3}
    if tag in arity:
        if len(kids) != arity[tag]:
            raise FormulaError(f"<{tag}> expects {arity[tag]} children, got {len(kids)}")
        a = [_conv(k) for k in kids]
        if tag == "msup":
            return f"{_group(a[0])}^{_group(a[1])}"
        if tag == "msub":
            return f"{_group(a[0])}_{_group(a[1])}"
        if tag == "msubsup" or tag == "munderover":
            return f"{_group(a[0])}_{_group(a[1])}^{_group(a[2])}"
        if tag == "mfrac":
            return rf"\frac{{{a[0]}}}{{{a[1]}}}"
        if tag == "mroot":
            return rf"\sqrt[{a[1]}]{{{a[0]}}}"
        if tag == "mover":
            accent = text_content(kids[1]).strip()
            if accent in _ACCENTS:
                return f"{_ACCENTS[accent]}{{{a[0]}}}"
            return rf"\overset{{{a[1]}}}{{{a[0]}}}"
        if tag == "munder":
            return f"{_group(a[0])}_{_group(a[1])}"
    if tag == "msqrt":
        return r"\sqrt{" + _join([_conv(k) for k in kids]) + "}"
    if tag == "mfenced":
        open_, close = el.get("open", "("), el.get("close", ")")
        sep = el.get("separators", ",") or ""
        inner = (sep[:1] or "").join(_conv(k) for k in kids)
        return _fence(open_) + inner + _fence(close)
    if tag == "mtable":
        rows = []
        for row in kids:
            cells = [_conv(c) for c in _kids(row)] if row.tag in ("mtr", "mlabeledtr") else [_conv(row)]
            rows.append(" & ".join(cells))
        return r"\begin{matrix}" + r" \\ ".join(rows) + r"\end{matrix}"
    raise FormulaError(f"unsupported MathML element <{tag}>")


def _fence(ch: str) -> str:
    return {"{": r"\{", "}": r"\}", "⟨": r"\langle", "⟩": r"\rangle"}.get(ch, ch)


def mathml_to_latex(math: Element) -> str:
    latex = _conv(math).strip()
    if not latex:
        raise FormulaError("MathML produced no LaTeX")
    return latex
