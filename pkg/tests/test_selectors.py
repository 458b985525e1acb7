import pytest

from mainextract.dom import Element, parse_html, visible_text
from mainextract.selectors import SelectorError, compile_selector, select, xpath_literal

DOC = parse_html(
    '<div id="a"><p class="x">1</p><p>2</p><span>s</span><p class="x">3</p></div>'
    '<div><p>4</p>tail</div>'
).root


def _texts(nodes):
    return [visible_text(n) if isinstance(n, Element) else n.data for n in nodes]


@pytest.mark.parametrize("sel,want", [
    ("//p", ["1", "2", "3", "4"]),
    ('//p[@class="x"]', ["1", "3"]),
    ('//div[@id="a"]/p', ["1", "2", "3"]),
    ('//div[@id="a"]/p[2]', ["2"]),
    ("/html[1]/body[1]/div[2]/p[1]", ["4"]),
    ("/html/body/div[2]/text()", ["tail"]),
    ("//div/*[3]", ["s"]),
    ("//span", ["s"]),
])
def test_select(sel, want):
    assert _texts(select(sel, DOC)) == want


def test_document_order_and_dedup():
    nodes = select("//div//p", DOC)
    assert _texts(nodes) == ["1", "2", "3", "4"]


def test_node_test_matches_text_and_elements():
    assert len(select("/html/body/div[2]/node()", DOC)) == 2


@pytest.mark.parametrize("bad", ["", "p", "//p[", "//p[@x=1]", "//p]"])
def test_rejects_unsupported(bad):
    with pytest.raises(SelectorError):
        compile_selector(bad)


def test_literal_quoting():
    assert xpath_literal("a") == '"a"'
    assert xpath_literal('say "hi"') == "'say \"hi\"'"
    with pytest.raises(SelectorError):
        xpath_literal("it's \"x\"")
    sel = "//p[@title=" + xpath_literal('say "hi"') + "]"
    root = parse_html('<p title=\'say "hi"\'>q</p>').root
    assert len(select(sel, root)) == 1
