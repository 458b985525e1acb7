import json
import math

import pytest

from mainextract.cli import make_bench_extractor
from mainextract.evalkit.bench import SchemaError, load_bench, parse_records, record_tracks
from mainextract.evalkit.metrics import edit_similarity, rouge_n_f1
from mainextract.evalkit.report import EvalConfig, evaluate
from mainextract.evalkit.structured import element_scores, extract_elements


def test_fig_record(fixtures_dir):
    [rec] = load_bench(fixtures_dir / "benchmark_example.json")
    assert rec.meta["level"] == "easy"
    assert rec.gold_markdown == "# Hello world!"
    assert "cc-select" not in rec.html and "cc-select" in rec.raw_html
    assert record_tracks(rec) == ["all", "simple"]


def test_missing_html_is_schema_error():
    with pytest.raises(SchemaError) as info:
        parse_records(json.dumps([{"track_id": "a", "convert_main_content": "x"}]), lenient=False)
    assert info.value.index == 0 and info.value.field == "html"


def test_lenient_jsonl(fixtures_dir):
    path = fixtures_dir / "three_one_bad.jsonl"
    records = load_bench(path, lenient=True)
    assert len(records) == 2 and len(records.errors) == 1
    assert records.errors[0].index == 1
    with pytest.raises(SchemaError):
        load_bench(path)


def test_level_normalization():
    recs = parse_records(json.dumps({"track_id": "m", "html": "<p>x</p>", "convert_main_content": "x",
                                     "meta": {"level": "Medium", "table": "with"}}), lenient=False)
    assert recs[0].meta["level"] == "mid"
    assert record_tracks(recs[0]) == ["all", "mid", "table"]


@pytest.fixture(scope="module")
def minibench(fixtures_dir):
    return load_bench(fixtures_dir / "minibench.jsonl")


def test_identity_and_empty(minibench):
    assert evaluate(make_bench_extractor("identity"), minibench).overall == 1.0
    assert evaluate(make_bench_extractor("empty"), minibench).overall == 0.0


def test_pipeline_report_matches_standalone_scores(minibench):
    extractor = make_bench_extractor("pipeline")
    report = evaluate(extractor, minibench, EvalConfig(n=5))
    want = [(r.track_id, rouge_n_f1(extractor(r), r.gold_markdown, 5)) for r in minibench]
    assert report.per_doc == want
    assert abs(report.overall - math.fsum(s for _, s in want) / len(want)) <= 1e-12
    for track, score in report.by_track.items():
        scores = [s for r, (_, s) in zip(minibench, want) if track in record_tracks(r)]
        assert abs(score - sum(scores) / len(scores)) <= 1e-12


def test_parallel_equals_serial(minibench):
    ex = make_bench_extractor("pipeline")
    a = evaluate(ex, minibench, EvalConfig(metric="editsim"))
    b = evaluate(ex, minibench, EvalConfig(metric="editsim", workers=4))
    assert a.dumps() == b.dumps()


def test_track_filter(minibench):
    report = evaluate(make_bench_extractor("identity"), minibench, EvalConfig(tracks=("equation",)))
    assert list(report.by_track) == ["equation"]
    assert report.n_docs == sum(1 for r in minibench if r.meta["equation"] == "with")


def test_failing_extractor_scores_zero(minibench):
    def boom(rec):
        if rec.track_id == "mb-001":
            raise RuntimeError("nope")
        return rec.gold_markdown
    report = evaluate(boom, minibench)
    assert dict(report.per_doc)["mb-001"] == 0.0
    assert report.errors == [{"track_id": "mb-001", "error": "RuntimeError: nope"}]
    assert report.overall == pytest.approx(19 / 20)


def test_bad_config():
    with pytest.raises(ValueError):
        EvalConfig(metric="bleu")
    with pytest.raises(ValueError):
        EvalConfig(tracks=("nope",))


def test_structured_elements():
    md = ("Intro $a+b$ text.\n\n```python\nx = 1\n```\n\n$$\\int f$$\n\n"
          "| h |\n| --- |\n| 1 |\n\n<table><tr><td colspan=\"2\">z</td></tr></table>")
    el = extract_elements(md)
    assert el.code == ["x = 1"]
    assert el.formulas == ["a+b", "\\int f"]
    assert len(el.tables) == 2
    scores = element_scores(md, md)
    assert scores == {"code": 1.0, "formula": 1.0, "table": 1.0}
    assert element_scores("", "plain words") == {"code": None, "formula": None, "table": None}
    assert element_scores("", md)["code"] == 0.0


def test_plain_text_mode(minibench):
    from mainextract.cli import make_plain_extractor
    report = evaluate(make_plain_extractor("identity"), minibench, EvalConfig(plain_text=True))
    assert report.overall == 1.0


def test_editsim_metric_uses_edit_similarity(minibench):
    ex = make_bench_extractor("pipeline")
    report = evaluate(ex, minibench[:3], EvalConfig(metric="editsim"))
    assert [s for _, s in report.per_doc] == [edit_similarity(ex(r), r.gold_markdown) for r in minibench[:3]]
