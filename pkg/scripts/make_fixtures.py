"""Generate the checked-in benchmark fixtures.

Pages are assembled from content specs.  Each spec renders twice: once as
HTML embedded in a boilerplate-heavy page (with cc-select markers on the
content blocks) and once as hand-written gold Markdown.  The gold side
never calls the package's formatter.

    python scripts/make_fixtures.py --seed 7 --out tests/fixtures
"""

from __future__ import annotations

import argparse
import html
import json
import random
from dataclasses import dataclass
from pathlib import Path

WORDS = """the of and to in is that for it as with was on be by this are from at or an which have not
data model system page content text web table code value result method large learning training corpus
quality extraction process document structure language number analysis figure section paper source
output input layer network graph index query cluster function return string array pattern filter
local global simple complex small public private general common special recent early modern final
measure report review update answer question problem solution example case point level rate order""".split()
HANZI = "的一是在不了有和人这中大为上个国我以要他时来用们生到作地于出就分对成会可主发年动同工也能下过子说产种面而方后多定行学法所民得经十三之进着等部度家电力里如水化高自二理起小物现实加量都两体制机当使点从业本去把性好应开它合还因由其些然前外天政四日那社义事平形相全表间样与关各重新线内数正心反你明看原又么利比或但质气第向道命此变条只没结解问意建月公无系军很情者最立代想已通并提直题党程展五果料象员革位入常文总次品式活设及管特件长求老头基资边流路级少图山统接知较将组见计别她手角期根论运农指几九区强放决西被干做必战先回则任取据处府思"
LANGS = ["en"] * 3 + ["non_en"]


def sentence(rng: random.Random, lang: str = "en", lo: int = 8, hi: int = 18) -> str:
    if lang == "non_en":
        return "".join(rng.choice(HANZI) for _ in range(rng.randint(lo + 4, hi + 10))) + "。"
    words = [rng.choice(WORDS) for _ in range(rng.randint(lo, hi))]
    words[0] = words[0].capitalize()
    return " ".join(words) + "."


def paragraph_text(rng, lang, n=None) -> str:
    n = n or rng.randint(2, 4)
    return ("" if lang == "non_en" else " ").join(sentence(rng, lang) for _ in range(n))


# ----------------------------------------------------------------- boilerplate

TW = ["flex", "items-center", "justify-between", "px-4", "py-2", "md:px-8", "text-sm", "text-gray-700",
      "hover:text-blue-600", "transition-colors", "duration-200", "rounded-lg", "shadow-sm", "bg-white",
      "border-b", "border-gray-200", "font-medium", "leading-relaxed", "tracking-tight", "gap-3"]


def cls(rng, base: str, k: int = 6) -> str:
    return base + " " + " ".join(rng.sample(TW, k))


def head_html(rng, title: str) -> str:
    css = "\n".join(
        f".{rng.choice(['c','nav','hdr','ft','btn','card'])}-{i}{{margin:{rng.randint(0,24)}px {rng.randint(0,24)}px;"
        f"padding:{rng.randint(0,16)}px;color:#{rng.randrange(16**6):06x};font-size:{rng.randint(11,22)}px;"
        f"line-height:1.{rng.randint(2,8)};display:{rng.choice(['block','flex','grid','inline-block'])}}}"
        for i in range(rng.randint(25, 45))
    )
    js = ";".join(
        f"window.dataLayer=window.dataLayer||[];function g{i}(){{dataLayer.push(arguments)}}"
        f"g{i}('config','UA-{rng.randint(10**7,10**8)}-{i}',{{anonymize_ip:true,page_path:location.pathname}})"
        for i in range(rng.randint(4, 8))
    )
    ld = json.dumps({"@context": "https://schema.org", "@type": "Article", "headline": title,
                     "publisher": {"@type": "Organization", "name": "Example Media", "logo": {"@type": "ImageObject", "url": "https://cdn.example.com/logo.png"}},
                     "datePublished": "2024-0%d-1%dT08:00:00Z" % (rng.randint(1, 9), rng.randint(0, 9))})
    metas = "".join(
        f'<meta property="og:{k}" content="{html.escape(v)}">'
        for k, v in [("title", title), ("type", "article"), ("site_name", "Example Media"),
                     ("image", f"https://cdn.example.com/img/{rng.randrange(10**6)}.jpg")]
    )
    return (
        f'<head><meta charset="utf-8"><meta name="viewport" content="width=device-width, initial-scale=1">'
        f"<title>{html.escape(title)}</title>{metas}"
        f'<link rel="stylesheet" href="https://cdn.example.com/css/main.{rng.randrange(16**8):08x}.css">'
        f"<style>{css}</style><script>{js}</script>"
        f'<script type="application/ld+json">{ld}</script></head>'
    )


def nav_html(rng) -> str:
    items = "".join(
        f'<li class="{cls(rng, "nav-item", 3)}"><a class="{cls(rng, "nav-link", 4)}" href="/section/{w}" '
        f'data-track="nav-{w}">{w.capitalize()}</a></li>'
        for w in rng.sample(WORDS, rng.randint(6, 10))
    )
    return (
        f'<header class="{cls(rng, "site-header")}"><div class="{cls(rng, "container")}">'
        f'<a class="logo" href="/"><img src="/static/logo.svg" alt="Example Media" width="120" height="32"></a>'
        f'<nav class="{cls(rng, "main-nav")}" aria-label="Main"><ul class="{cls(rng, "menu", 4)}">{items}</ul></nav>'
        f'<form class="search" action="/search"><input type="search" name="q" placeholder="Search"><button type="submit">Go</button></form>'
        f"</div></header>"
    )


def sidebar_html(rng) -> str:
    links = "".join(
        f'<li class="{cls(rng, "related-item", 3)}"><a href="/post/{rng.randrange(10**5)}" class="{cls(rng, "related-link", 3)}">'
        f"{sentence(rng, 'en', 4, 8)}</a></li>"
        for _ in range(rng.randint(4, 7))
    )
    return (
        f'<aside class="{cls(rng, "sidebar")}"><div class="widget related"><h3 class="widget-title">Related posts</h3>'
        f'<ul class="{cls(rng, "related-list", 3)}">{links}</ul></div>'
        f'<div class="ad-slot advert" data-ad-unit="/{rng.randrange(10**6)}/sidebar" style="min-height:250px"></div></aside>'
    )


def footer_html(rng) -> str:
    cols = "".join(
        f'<div class="{cls(rng, "footer-col", 3)}"><h4>{w.capitalize()}</h4><ul>'
        + "".join(f'<li><a href="/{w}/{x}">{x.capitalize()}</a></li>' for x in rng.sample(WORDS, 4))
        + "</ul></div>"
        for w in rng.sample(WORDS, 3)
    )
    return (
        f'<footer class="{cls(rng, "site-footer")}">{cols}'
        f'<p class="copyright">© 2024 Example Media. All rights reserved.</p></footer>'
        f'<div class="cookie-banner" role="dialog" style="display:none"><p>We use cookies to improve your experience.</p>'
        f'<button class="btn accept">Accept</button></div>'
        f'<script src="https://cdn.example.com/js/app.{rng.randrange(16**8):08x}.js" async></script>'
    )


def share_html(rng) -> str:
    nets = ["twitter", "facebook", "linkedin", "reddit"]
    return (
        '<div class="share-bar social">'
        + "".join(f'<a class="share share-{n}" href="https://{n}.com/share?u=x" rel="nofollow">{n.capitalize()}</a>' for n in nets)
        + "</div>"
    )


# ----------------------------------------------------------------- content specs

MARK = ' cc-select="true"'


@dataclass
class Piece:
    html: str
    md: str
    main_html: str


def piece_heading(text, level=2) -> Piece:
    h = f"<h{level}>{html.escape(text)}</h{level}>"
    return Piece(f"<h{level}{MARK}>{html.escape(text)}</h{level}>", "#" * level + " " + text, h)


def piece_paragraph(rng, text: str) -> Piece:
    cl = cls(rng, "prose", 3)
    return Piece(f'<p class="{cl}"{MARK}>{html.escape(text)}</p>', text, f'<p class="{cl}">{html.escape(text)}</p>')


def piece_list(rng, lang, ordered=False) -> Piece:
    items = [sentence(rng, lang, 3, 8) for _ in range(rng.randint(3, 6))]
    tag = "ol" if ordered else "ul"
    inner = "".join(f"<li>{html.escape(i)}</li>" for i in items)
    md = "\n".join((f"{k}. " if ordered else "- ") + i for k, i in enumerate(items, 1))
    return Piece(f"<{tag}{MARK}>{inner}</{tag}>", md, f"<{tag}>{inner}</{tag}>")


def piece_image(rng) -> Piece:
    src = f"https://cdn.example.com/img/{rng.randrange(10**6)}.png"
    alt = sentence(rng, "en", 2, 4).rstrip(".")
    tag = f'<img src="{src}" alt="{html.escape(alt)}">'
    return Piece(f"<figure{MARK}>{tag}</figure>", f"![{alt}]({src})", f"<figure>{tag}</figure>")


CODE_SNIPPETS = {
    "python": ["def moving_average(xs, k):\n    out = []\n    for i in range(len(xs) - k + 1):\n        out.append(sum(xs[i:i + k]) / k)\n    return out",
               "class Stack:\n    def __init__(self):\n        self.items = []\n\n    def push(self, x):\n        self.items.append(x)\n\n    def pop(self):\n        return self.items.pop()",
               "import json\n\nwith open(\"data.json\") as fh:\n    data = json.load(fh)\nprint(len(data))"],
    "javascript": ["function debounce(fn, ms) {\n  let t;\n  return (...args) => {\n    clearTimeout(t);\n    t = setTimeout(() => fn(...args), ms);\n  };\n}",
                   "const total = items\n  .filter(x => x.active)\n  .reduce((acc, x) => acc + x.price, 0);\nconsole.log(total);"],
    "c": ["#include <stdio.h>\n\nint main(void) {\n    int i;\n    for (i = 0; i < 10; i++) {\n        printf(\"%d\\n\", i * i);\n    }\n    return 0;\n}"],
    "bash": ["$ pip install requests\n$ export API_KEY=secret\n$ python fetch.py --limit 10 | grep -v DEBUG"],
    "sql": ["SELECT name, COUNT(*) AS n\nFROM orders\nWHERE created_at > '2024-01-01'\nGROUP BY name\nORDER BY n DESC;"],
    "rust": ["fn main() {\n    let mut v = Vec::new();\n    for i in 0..5 {\n        v.push(i * 2);\n    }\n    println!(\"{:?}\", v);\n}"],
    "go": ["package main\n\nimport \"fmt\"\n\nfunc main() {\n\tnums := []int{1, 2, 3}\n\tfor _, n := range nums {\n\t\tfmt.Println(n)\n\t}\n}"],
}


def piece_code(rng, style: str) -> Piece:
    lang = rng.choice(sorted(CODE_SNIPPETS))
    code = rng.choice(CODE_SNIPPETS[lang])
    esc = html.escape(code, quote=False)
    md = f"```{lang}\n{code}\n```"
    if style == "pre_code":
        body = f'<pre><code class="language-{lang}">{esc}</code></pre>'
        return Piece(f'<div class="code-block"{MARK}>{body}</div>', md, f'<div class="code-block">{body}</div>')
    if style == "highlight":
        # pygments-like spans around tokens; text content stays the same
        lines = esc.split("\n")
        spans = "\n".join(f'<span class="line">{ln}</span>' if ln else "" for ln in lines)
        body = f'<div class="highlight highlight-source-{lang}"><pre>{spans}\n</pre></div>'
        return Piece(body.replace('<div class="highlight', f'<div{MARK} class="highlight', 1), md, body)
    if style == "linenos":
        nums = "\n".join(str(i) for i in range(1, code.count("\n") + 2))
        body = (f'<table class="highlighttable"><tbody><tr><td class="linenos"><div class="linenodiv"><pre>{nums}</pre></div></td>'
                f'<td class="code"><div class="highlight"><pre><code class="language-{lang}">{esc}\n</code></pre></div></td></tr></tbody></table>')
        return Piece(f'<div class="codehilite"{MARK}>{body}</div>', md, f'<div class="codehilite">{body}</div>')
    # split: one listing broken into two adjacent <pre> elements
    lines = code.split("\n")
    cut = max(1, len(lines) // 2)
    a, b = "\n".join(lines[:cut]), "\n".join(lines[cut:])
    body = (f'<pre class="lang-{lang}">{html.escape(a, quote=False)}</pre>\n'
            f'<pre class="lang-{lang}">{html.escape(b, quote=False)}</pre>')
    return Piece(f'<div class="listing"{MARK}>{body}</div>', md, f'<div class="listing">{body}</div>')


FORMULAS = [
    (r"E = mc^2", "<mi>E</mi><mo>=</mo><mi>m</mi><msup><mi>c</mi><mn>2</mn></msup>"),
    (r"\frac{a}{b}", "<mfrac><mi>a</mi><mi>b</mi></mfrac>"),
    (r"x_i^2", "<msubsup><mi>x</mi><mi>i</mi><mn>2</mn></msubsup>"),
    (r"\sqrt{x}", "<msqrt><mi>x</mi></msqrt>"),
    (r"\alpha+\beta", "<mi>α</mi><mo>+</mo><mi>β</mi>"),
    (r"\sum_{i=1}^{n} x_i", None),
    (r"\int_0^1 f(x)\,dx", None),
    (r"P(A \mid B) = \frac{P(B \mid A) P(A)}{P(B)}", None),
    (r"\nabla \cdot \mathbf{E} = \frac{\rho}{\varepsilon_0}", None),
]


def _mathml_latex(latex: str) -> str:
    # mathml rendering of "E = mc^2" has no spaces
    return latex.replace(" ", "")


def piece_formula(rng, lang, style: str) -> Piece:
    """A paragraph with an inline formula or a standalone display formula."""
    if style == "mathml":
        latex, mml = rng.choice([f for f in FORMULAS if f[1]])
        latex = _mathml_latex(latex)
        display = rng.random() < 0.5
        attr = ' display="block"' if display else ""
        node = f"<math{attr}>{mml}</math>"
    else:
        latex, _ = rng.choice(FORMULAS)
        display = rng.random() < 0.5
        if style == "mathjax":
            typ = "math/tex; mode=display" if display else "math/tex"
            node = (f'<span class="MathJax_Preview">{html.escape(latex)}</span>'
                    f'<span class="MathJax" role="presentation"><span class="mi">x</span></span>'
                    f'<script type="{typ}">{html.escape(latex, quote=False)}</script>')
        elif style == "katex":
            inner = (f'<span class="katex"><span class="katex-mathml"><math><semantics><mrow><mi>x</mi></mrow>'
                     f'<annotation encoding="application/x-tex">{html.escape(latex, quote=False)}</annotation></semantics></math></span>'
                     f'<span class="katex-html" aria-hidden="true"><span class="base">x</span></span></span>')
            node = f'<span class="katex-display">{inner}</span>' if display else inner
        else:  # raw delimiters left for client-side rendering
            node = html.escape(f"$${latex}$$" if display else f"${latex}$", quote=False)
    if display:
        md = f"$${latex}$$"
        return Piece(f'<div class="equation"{MARK}>{node}</div>', md, f'<div class="equation">{node}</div>')
    before, after = sentence(rng, lang, 4, 8), sentence(rng, lang, 4, 8)
    md = f"{before} ${latex}$ {after}"
    body = f"{html.escape(before)} {node} {html.escape(after)}"
    return Piece(f"<p{MARK}>{body}</p>", md, f"<p>{body}</p>")


def piece_table(rng, lang, complex_: bool) -> Piece:
    ncols, nrows = rng.randint(2, 4), rng.randint(2, 5)
    header = [rng.choice(WORDS).capitalize() for _ in range(ncols)]
    rows = [[str(rng.randint(0, 999)) if c else rng.choice(WORDS) for c in range(ncols)] for _ in range(nrows)]
    if complex_:
        head = "<tr>" + "".join(f"<th>{h}</th>" for h in header) + "</tr>"
        span = f'<tr><td colspan="{ncols}">{sentence(rng, "en", 3, 5)}</td></tr>'
        body = "".join("<tr>" + "".join(f"<td>{c}</td>" for c in r) + "</tr>" for r in rows)
        table = f"<table><thead>{head}</thead><tbody>{span}{body}</tbody></table>"
        return Piece(table.replace("<table>", f"<table{MARK}>", 1), table, table)
    thead = "<thead><tr>" + "".join(f"<th>{h}</th>" for h in header) + "</tr></thead>"
    body = "<tbody>" + "".join("<tr>" + "".join(f"<td>{c}</td>" for c in r) + "</tr>" for r in rows) + "</tbody>"
    cl = "data-table table table-striped"
    table = f'<table class="{cl}">{thead}{body}</table>'
    md = "\n".join(["| " + " | ".join(header) + " |", "| " + " | ".join(["---"] * ncols) + " |"]
                   + ["| " + " | ".join(r) + " |" for r in rows])
    return Piece(table.replace("<table ", f"<table{MARK} ", 1), md, table)


# ----------------------------------------------------------------- pages

def assemble(rng, title: str, pieces: list[Piece], lang: str, conversational: bool = False) -> tuple[str, str, str]:
    title_piece = piece_heading(title, 1)
    allp = [title_piece] + pieces
    body_html = "".join(p.html for p in allp)
    if conversational:
        # forum thread: each post gets a user card that is not main content
        posts = []
        for p in allp[1:]:
            user = rng.choice(WORDS) + str(rng.randint(1, 99))
            posts.append(f'<div class="post"><div class="post-meta user-info"><a href="/u/{user}">{user}</a>'
                         f'<span class="timestamp">2 hours ago</span></div><div class="post-body">{p.html}</div></div>')
        body_html = allp[0].html + "".join(posts)
    page = (
        f"<!DOCTYPE html><html lang=\"{'en' if lang == 'en' else 'zh'}\">{head_html(rng, title)}"
        f'<body class="{cls(rng, "page")}">{nav_html(rng)}'
        f'<div class="{cls(rng, "breadcrumb", 3)}"><a href="/">Home</a> › <a href="/blog">Blog</a></div>'
        f'<main class="{cls(rng, "layout")}"><article class="{cls(rng, "post-content")}">{body_html}{share_html(rng)}</article>'
        f"{sidebar_html(rng)}</main>{footer_html(rng)}</body></html>"
    )
    gold_md = "\n\n".join(p.md for p in allp)
    main_html = "<html><body>" + "".join(p.main_html for p in allp) + "</body></html>"
    return page, gold_md, main_html


def meta(lang, style, level, table, code, eq) -> dict:
    w = lambda b: "with" if b else "without"
    return {"language": lang, "style": style, "level": level, "table": w(table), "code": w(code), "equation": w(eq)}


FIG_RECORD = {
    "track_id": "XXXX",
    "html": "<html><body><h1 cc-select=True>Hello world!</h1><aside>advertisement</aside></body></html>",
    "main_html": "<html><body><h1>Hello world!</h1></body></html>",
    "convert_main_content": "# Hello world!",
    "meta": {"language": "en", "style": "Normal", "level": "easy", "table": "without", "code": "without", "equation": "without"},
}


def minibench(rng) -> list[dict]:
    records = [dict(FIG_RECORD)]
    levels = ["easy", "medium", "hard"]
    for i in range(1, 20):
        lang = LANGS[i % len(LANGS)]
        has_table, has_code, has_eq = i % 4 == 1, i % 5 == 2, i % 6 == 3
        conversational = i % 7 == 5
        pieces = []
        for _ in range(rng.randint(2, 4)):
            pieces.append(piece_paragraph(rng, paragraph_text(rng, lang)))
        if rng.random() < 0.5:
            pieces.insert(1, piece_heading(sentence(rng, lang, 3, 6).rstrip(".。"), 2))
        if has_table:
            pieces.append(piece_table(rng, lang, complex_=False))
        if has_code:
            pieces.append(piece_code(rng, "pre_code"))
        if has_eq:
            pieces.append(piece_formula(rng, lang, "mathjax"))
        if i % 3 == 0:
            pieces.append(piece_list(rng, lang, ordered=i % 2 == 0))
        if i % 8 == 4:
            pieces.append(piece_image(rng))
        title = sentence(rng, lang, 4, 8).rstrip(".。")
        page, md, main_html = assemble(rng, title, pieces, lang, conversational)
        records.append({
            "track_id": f"mb-{i:03d}",
            "html": page,
            "main_html": main_html,
            "convert_main_content": md,
            "meta": meta(lang, "Conversational" if conversational else "Normal", levels[i % 3], has_table, has_code, has_eq),
        })
    return records


def structured(rng) -> list[dict]:
    code_styles = ["pre_code", "highlight", "linenos", "split"]
    formula_styles = ["mathjax", "katex", "mathml", "raw"]
    records = []
    for i in range(30):
        lang = "en" if i % 5 else "non_en"
        pieces = [piece_paragraph(rng, paragraph_text(rng, lang))]
        kinds = [("code", i % 3 == 0 or i % 4 == 1), ("formula", i % 3 == 1 or i % 5 == 0), ("table", i % 3 == 2 or i % 4 == 3)]
        for kind, on in kinds:
            if not on:
                continue
            if kind == "code":
                pieces.append(piece_code(rng, code_styles[i % len(code_styles)]))
            elif kind == "formula":
                for k in range(2):
                    pieces.append(piece_formula(rng, lang, formula_styles[(i + k) % len(formula_styles)]))
            else:
                pieces.append(piece_table(rng, lang, complex_=i % 4 == 3))
            pieces.append(piece_paragraph(rng, paragraph_text(rng, lang, 2)))
        title = sentence(rng, lang, 3, 7).rstrip(".。")
        page, md, main_html = assemble(rng, title, pieces, lang)
        records.append({
            "track_id": f"st-{i:03d}",
            "html": page,
            "main_html": main_html,
            "convert_main_content": md,
            "groundtruth_content": md,
            "meta": meta(lang, "Normal", ["easy", "medium", "hard"][i % 3], kinds[2][1], kinds[0][1], kinds[1][1]),
        })
    return records


def write_jsonl(path: Path, records: list[dict]) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for r in records:
            fh.write(json.dumps(r, ensure_ascii=False) + "\n")


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default="tests/fixtures")
    args = ap.parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_jsonl(out / "minibench.jsonl", minibench(random.Random(args.seed)))
    write_jsonl(out / "structured.jsonl", structured(random.Random(args.seed + 1)))
    (out / "benchmark_example.json").write_text(json.dumps(FIG_RECORD, indent=2) + "\n", encoding="utf-8")
    bad = [json.dumps(FIG_RECORD), '{"track_id": "broken", "html": ', json.dumps(dict(FIG_RECORD, track_id="YYYY"))]
    (out / "three_one_bad.jsonl").write_text("\n".join(bad) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
