import pytest
from hypothesis import given, strategies as st

from mainextract.dom import parse_html, serialize, serialize_node
from mainextract.preprocess import (
    EMPTY_PLACEHOLDER, BlockKind, EmptyDocument, PreprocessConfig, block_text, chunk_blocks, is_layout_table, preprocess, truncate_block,
)

import synth


def test_benchmark_example_blocks(fig_html):
    simp, mapping = preprocess(parse_html(fig_html), doc_id="XXXX")
    # the marker is not a kept attribute, so the labeler never sees it
    assert [b.text for b in simp.blocks] == ["<h1>Hello world!</h1>", EMPTY_PLACEHOLDER]
    assert len(mapping) == 2 and simp.doc_id == "XXXX"


def test_removed_tags_render_as_placeholder_and_keep_indices():
    tree = parse_html("<body><nav><p>menu</p></nav><p>body text</p><footer>f</footer></body>")
    simp, mapping = preprocess(tree)
    assert len(simp) == len(mapping)
    assert [b.index for b in simp.blocks] == list(range(1, len(simp) + 1))
    assert simp.blocks[0].text == EMPTY_PLACEHOLDER
    assert "body text" in simp.blocks[1].text


def test_attributes_reduced_to_class_and_id():
    simp, _ = preprocess(parse_html('<p class="lead" id="x" style="color:red" data-k="1" onclick="f()">hello</p>'))
    assert simp.blocks[0].text == '<p class="lead" id="x">hello</p>'


def test_inline_wrappers_unwrapped_but_links_kept():
    simp, _ = preprocess(parse_html('<p><span class="a"><b>x</b></span> <a href="/u" class="l">y</a></p>'))
    assert simp.blocks[0].text == '<p>x <a class="l">y</a></p>'


def test_paragraph_truncation():
    long = "word " * 100
    text, truncated = truncate_block(f"<p>{long}</p>", BlockKind.FLOW, PreprocessConfig(paragraph_truncation=50))
    assert truncated
    assert len(text) < 80


def test_table_truncation_marker():
    cells = "".join(f"<tr><td>{i}</td><td>{i}</td></tr>" for i in range(10))
    simp, _ = preprocess(parse_html(f"<table><tr><th>h</th><th>k</th></tr>{cells}</table>"))
    assert simp.blocks[0].text.endswith("…(+14 cells)</table>") or "…(+14 cells)" in simp.blocks[0].text


def test_list_truncation_marker():
    items = "".join(f"<li>i{i}</li>" for i in range(15))
    simp, _ = preprocess(parse_html(f"<ul>{items}</ul>"))
    assert "…(+5 items)" in simp.blocks[0].text


def test_layout_table_split_into_cells():
    tree = parse_html("<table><tr><td><div>side</div></td><td><div><p>main body</p></div></td></tr></table>")
    table = tree.body.children[0]
    assert is_layout_table(table)
    blocks = chunk_blocks(tree)
    assert len(blocks) == 2
    assert PreprocessConfig(layout_table_split=False) and len(chunk_blocks(tree, PreprocessConfig(layout_table_split=False))) == 1


def test_data_table_is_atomic():
    tree = parse_html("<table><tr><th>a</th></tr><tr><td>1</td></tr></table>")
    assert not is_layout_table(tree.body.children[0])
    assert len(chunk_blocks(tree)) == 1


def test_mixed_content_becomes_inline_run_block():
    tree = parse_html("<div>loose <b>text</b> here<p>para</p>tail</div>")
    blocks = chunk_blocks(tree)
    texts = [block_text(tree, b) for b in blocks]
    assert texts == ["loose text here", "para", "tail"]
    assert blocks[0].extent == 3


def test_empty_body_raises_empty_document():
    with pytest.raises(EmptyDocument):
        preprocess(parse_html("<html><body></body></html>"))


def test_preprocess_does_not_mutate_input(fig_html):
    tree = parse_html(fig_html)
    before = serialize(tree)
    preprocess(tree)
    assert serialize(tree) == before


def test_config_validation_and_roundtrip(tmp_path):
    with pytest.raises(ValueError):
        PreprocessConfig(paragraph_truncation=0)
    with pytest.raises(ValueError):
        PreprocessConfig.from_dict({"bogus": 1})
    cfg = PreprocessConfig(table_cell_sample=4)
    p = tmp_path / "c.json"
    import json
    p.write_text(json.dumps(cfg.to_dict()))
    assert PreprocessConfig.load(p) == cfg


@given(st.integers(0, 10_000))
def test_chunking_is_deterministic_and_aligned(seed):
    import random
    page = synth.fuzz_page(random.Random(seed))
    tree = parse_html(page)
    try:
        s1, m1 = preprocess(tree)
    except EmptyDocument:
        return
    s2, m2 = preprocess(parse_html(page))
    assert [b.text for b in s1.blocks] == [b.text for b in s2.blocks]
    assert len(s1) == len(m1)
    assert [b.source_order for b in m1.blocks] == list(range(1, len(m1) + 1))
    # blocks are disjoint and in document order
    paths = [b.root_path.steps for b in m1.blocks]
    assert paths == sorted(paths)


def test_strip_noncontent_examples():
    from mainextract.preprocess import strip_noncontent
    tree = parse_html("<div><script>x()</script><p>Hi</p></div>")
    assert serialize(strip_noncontent(tree).body) == "<body><div><p>Hi</p></div></body>"
    nested = parse_html("<div><aside><p>ad</p></aside><p>k</p></div>")
    assert "ad" not in serialize(strip_noncontent(nested))
    assert "x()" in serialize(tree)


def test_simplify_attributes_only_in_simplified_view():
    from mainextract.preprocess import simplify_attributes
    tree = parse_html('<img src="u" alt="t"><p class="a" style="c" id="b" data-x="1">z</p>')
    simple = simplify_attributes(tree)
    assert serialize(simple.body) == '<body><img><p class="a" id="b">z</p></body>'
    assert tree.body.children[0].get("src") == "u"


@given(st.integers(0, 10_000))
def test_simplified_text_never_longer_than_raw_block(seed):
    import random
    tree = parse_html(synth.fuzz_page(random.Random(seed)))
    try:
        simp, mapping = preprocess(tree)
    except EmptyDocument:
        return
    from mainextract.preprocess import block_nodes
    raw = sum(len(serialize_node(n)) for b in mapping.blocks for n in block_nodes(tree, b))
    simplified = sum(len(b.text) for b in simp.blocks if b.text != EMPTY_PLACEHOLDER)
    assert simplified <= raw


def test_fixture_corpus_simplified_smaller_than_raw(fixtures_dir):
    from mainextract.evalkit import load_bench
    for name in ("minibench.jsonl", "structured.jsonl"):
        for rec in load_bench(fixtures_dir / name):
            simp, _ = preprocess(parse_html(rec.html))
            assert sum(len(b.text) for b in simp.blocks) < len(rec.html)


@given(st.integers(0, 10_000))
def test_preprocess_idempotent_on_simplified_output(seed):
    import random
    tree = parse_html(synth.fuzz_page(random.Random(seed)))
    try:
        simp, _ = preprocess(tree)
    except EmptyDocument:
        return
    for b in simp.blocks:
        # layout-table cells cannot stand alone outside their table
        if b.text == EMPTY_PLACEHOLDER or b.truncated or b.text.startswith(("<td", "<th")):
            continue
        again, _ = preprocess(parse_html(f"<html><body>{b.text}</body></html>"))
        assert [x.text for x in again.blocks] == [b.text]
