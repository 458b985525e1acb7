"""Seeded generators for fuzz pages and template clusters used by the tests."""

from __future__ import annotations

import html
import random

WORDS = ("alpha beta gamma delta river stone cloud paper table code metric vector graph layer token "
         "market design quiet rapid amber cedar ocean field north light winter signal").split()

_BLOCKS = ["div", "p", "section", "article", "blockquote", "h2", "h3", "ul", "ol", "table", "pre", "figure", "main", "nav", "footer", "aside"]
_INLINE = ["span", "a", "b", "em", "code", "strong", "i", "small"]


def words(rng: random.Random, lo: int = 1, hi: int = 12) -> str:
    return " ".join(rng.choice(WORDS) for _ in range(rng.randint(lo, hi)))


def _attrs(rng: random.Random) -> str:
    out = []
    if rng.random() < 0.3:
        out.append(f'class="{rng.choice(WORDS)} {rng.choice(WORDS)}"')
    if rng.random() < 0.15:
        out.append(f'id="{rng.choice(WORDS)}{rng.randint(0, 99)}"')
    if rng.random() < 0.1:
        out.append(f'data-x="{rng.randint(0, 9)}"')
    if rng.random() < 0.05:
        out.append('style="color:red"')
    return (" " + " ".join(out)) if out else ""


def _inline(rng, depth) -> str:
    parts = []
    for _ in range(rng.randint(1, 4)):
        r = rng.random()
        if r < 0.55 or depth > 3:
            parts.append(html.escape(words(rng)))
        elif r < 0.8:
            tag = rng.choice(_INLINE)
            extra = f' href="/{rng.choice(WORDS)}"' if tag == "a" else ""
            parts.append(f"<{tag}{extra}{_attrs(rng)}>{_inline(rng, depth + 1)}</{tag}>")
        elif r < 0.88:
            parts.append("<br>")
        elif r < 0.94:
            parts.append(f'<img src="/i/{rng.randint(0, 99)}.png" alt="{rng.choice(WORDS)}">')
        else:
            parts.append(f"<script>var x={rng.randint(0, 9)};</script>")
    return " ".join(parts)


def _block(rng, depth) -> str:
    tag = rng.choice(_BLOCKS)
    if depth > 4:
        tag = "p"
    a = _attrs(rng)
    if tag in ("ul", "ol"):
        items = "".join(f"<li>{_inline(rng, depth)}</li>" for _ in range(rng.randint(1, 14)))
        return f"<{tag}{a}>{items}</{tag}>"
    if tag == "table":
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        cells = []
        for _ in range(rows):
            tds = []
            for _ in range(cols):
                inner = _block(rng, depth + 1) if rng.random() < 0.25 else _inline(rng, depth)
                tds.append(f"<td>{inner}</td>")
            cells.append("<tr>" + "".join(tds) + "</tr>")
        head = "<tr><th>h</th></tr>" if rng.random() < 0.3 else ""
        return f"<table{a}>{head}{''.join(cells)}</table>"
    if tag == "pre":
        return f"<pre{a}>{html.escape(words(rng))}\n  {html.escape(words(rng))}</pre>"
    if tag == "figure":
        return f'<figure{a}><img src="/f.png" alt="f"><figcaption>{html.escape(words(rng))}</figcaption></figure>'
    if tag in ("p", "h2", "h3"):
        return f"<{tag}{a}>{_inline(rng, depth)}</{tag}>"
    kids = []
    for _ in range(rng.randint(1, 4)):
        r = rng.random()
        kids.append(_block(rng, depth + 1) if r < 0.6 else _inline(rng, depth))
    return f"<{tag}{a}>{''.join(kids)}</{tag}>"


def _corrupt(rng, text: str) -> str:
    """Tag-soup damage: dropped close tags, stray closers, truncation."""
    r = rng.random()
    if r < 0.15:
        text = text.replace("</p>", "", rng.randint(1, 3))
    elif r < 0.25:
        pos = rng.randrange(len(text))
        text = text[:pos] + "</div></span>" + text[pos:]
    elif r < 0.3:
        text = text[: rng.randrange(len(text) // 2, len(text))]
    elif r < 0.35:
        text = text.replace("<li>", "<li><p>", 2)
    return text


def fuzz_page(rng: random.Random) -> str:
    head = "<head><title>t</title><style>p{color:red}</style></head>" if rng.random() < 0.7 else ""
    body = "".join(_block(rng, 0) for _ in range(rng.randint(1, 6)))
    if rng.random() < 0.2:
        body = html.escape(words(rng)) + body + html.escape(words(rng))
    return _corrupt(rng, f"<!DOCTYPE html><html>{head}<body>{body}</body></html>")


def fuzz_corpus(seed: int, n: int) -> list[str]:
    rng = random.Random(seed)
    return [fuzz_page(rng) for _ in range(n)]


# ------------------------------------------------------------------ templates

def _para(rng) -> str:
    return words(rng, 14, 30) + "."


def template_cluster(rng: random.Random, index: int) -> tuple[str, list[str]]:
    """One host and 3-6 pages sharing its layout; the layout style varies by index."""
    host = f"site{index:02d}.example.org"
    style = index % 5
    prefix = rng.choice(WORDS)
    pages = []
    for k in range(rng.randint(3, 6)):
        n_para = rng.randint(2, 6)
        title = words(rng, 3, 6)
        paras = "".join(f"<p>{_para(rng)}</p>" for _ in range(n_para))
        nav = "<ul>" + "".join(f'<li><a href="/{w}">{w}</a></li>' for w in rng.sample(WORDS, 5)) + "</ul>"
        ad = f'<div class="{prefix}-ad sponsor">{words(rng, 2, 4)} <a href="/buy">buy now</a></div>'
        if style == 0:  # id-anchored content container
            body = (f'<div id="{prefix}-nav" class="menu">{nav}</div>'
                    f'<div id="{prefix}-content"><h1>{title}</h1>{paras}</div>{ad}'
                    f'<div id="{prefix}-foot" class="footer-links"><a href="/about">about</a> <a href="/privacy">privacy</a></div>')
        elif style == 1:  # class-anchored content
            body = (f'<div class="{prefix}-menu navigation">{nav}</div>'
                    f'<div class="{prefix}-article"><h2>{title}</h2>{paras}<div class="share">share this</div></div>{ad}')
        elif style == 2:  # no anchors at all: positional paths only
            body = f"<div><div>{nav}</div><div><h1>{title}</h1>{paras}</div><div><a href='/x'>x</a> <a href='/y'>y</a></div></div>"
        elif style == 3:  # layout table holding the content cell
            body = (f'<table class="{prefix}-layout"><tr><td class="side">{nav}</td>'
                    f'<td class="main-cell"><h1>{title}</h1>{paras}</td></tr></table>')
        else:  # everything is content or everything is chrome
            body = f"<article><h1>{title}</h1>{paras}</article>" if index % 10 == 4 else f"<div>{nav}</div>"
        pages.append(f"<html><head><title>{title}</title></head><body>{body}</body></html>")
    return host, pages


def template_clusters(seed: int, n: int) -> list[tuple[str, list[str]]]:
    rng = random.Random(seed)
    return [template_cluster(rng, i) for i in range(n)]
