import random

import pytest
from hypothesis import given, settings, strategies as st

from mainextract.dom import is_subtree, parse_html, serialize, visible_text
from mainextract.fsm import Label, LabelSequence, LengthMismatch
from mainextract.labeling import HeuristicLabeler
from mainextract.pipeline import extract_main, extract_with_marker
from mainextract.postprocess import project_labels, validate_main_html
from mainextract.preprocess import preprocess
from synth import fuzz_corpus


def _labels(*names):
    return LabelSequence([Label(n) for n in names])


def test_fig_example_main_html(fig_html):
    ex = extract_with_marker(fig_html)
    assert serialize(ex.main.tree) == "<html><body><h1>Hello world!</h1></body></html>"
    assert ex.main.kept_block_indices == [1]


def test_all_other_is_empty_but_valid():
    tree = parse_html("<p>a</p><p>b</p>")
    _, mapping = preprocess(tree)
    main = project_labels(mapping, _labels("other", "other"), tree)
    assert main.empty and main.flags["empty"] is True
    assert serialize(main.tree) == "<html><body></body></html>"


def test_length_mismatch():
    tree = parse_html("<p>a</p><p>b</p>")
    _, mapping = preprocess(tree)
    with pytest.raises(LengthMismatch):
        project_labels(mapping, _labels("main"), tree)


def test_ancestors_are_copied_with_attributes():
    tree = parse_html('<div id="wrap" class="c"><section><p>keep</p></section><p>drop</p></div>')
    _, mapping = preprocess(tree)
    main = project_labels(mapping, _labels("main", "other"), tree)
    assert serialize(main.tree) == '<html><body><div id="wrap" class="c"><section><p>keep</p></section></div></body></html>'


def test_inline_run_projects_all_nodes():
    tree = parse_html("<div>lead <b>bold</b> tail<p>para</p></div>")
    _, mapping = preprocess(tree)
    main = project_labels(mapping, _labels("main", "other"), tree)
    assert visible_text(main.tree.root) == "lead bold tail"
    assert validate_main_html(main, tree, mapping).ok


def test_validator_catches_injected_text():
    tree = parse_html("<p>a</p>")
    _, mapping = preprocess(tree)
    main = project_labels(mapping, _labels("main"), tree)
    main.tree.body.children[0].children[0].data = "forged"
    assert not validate_main_html(main, tree, mapping).ok


@settings(max_examples=40)
@given(st.integers(0, 10_000), st.integers(0, 2**32 - 1))
def test_random_labels_stay_contained(seed, label_seed):
    html = fuzz_corpus(seed, 1)[0]
    tree = parse_html(html)
    _, mapping = preprocess(tree)
    rng = random.Random(label_seed)
    labels = LabelSequence([rng.choice([Label.MAIN, Label.OTHER]) for _ in range(len(mapping))])
    main = project_labels(mapping, labels, tree)
    report = validate_main_html(main, tree, mapping)
    assert report.ok, report.violations
    assert is_subtree(main.tree, tree).ok


def test_heuristic_pipeline_is_contained(fixtures_dir):
    import json
    for line in (fixtures_dir / "minibench.jsonl").read_text().splitlines():
        rec = json.loads(line)
        tree = parse_html(rec["html"])
        ex = extract_main(tree, HeuristicLabeler())
        assert validate_main_html(ex.main, tree, ex.mapping).ok
