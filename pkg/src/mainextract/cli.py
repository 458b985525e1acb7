"""Command-line interface.

Exit codes: 0 success (at least one document processed), 1 every document
failed or a required remote service was unavailable, 2 unusable input or
configuration.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .batch import FORMATS, PipelineConfig, run_cluster_extract, run_extract
from .dom import parse_html
from .evalkit import (
    TRACKS,
    ComparePair,
    EvalConfig,
    JudgeConfig,
    JudgeUnavailable,
    MalformedVerdict,
    SchemaError,
    compare_pairs,
    evaluate,
    judge_pair,
    load_bench,
    load_weights,
)
from .evalkit.bench import BenchRecord
from .evalkit.judge import balanced_swaps
from .evalkit.report import METRICS
from .formatter import ContentList, content_list_to_markdown, main_html_to_plain_text, to_content_list
from .fsm import IllegalToken, LengthMismatch, parse_label_output
from .ingest import InputError, RawDocument, read_documents, sniff_format
from .labeling import make_labeler
from .pipeline import extract_main, extract_with_marker

log = logging.getLogger("mainextract")

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


class UsageError(Exception):
    pass


def _read_input(path: str) -> tuple[bytes | None, str]:
    if path == "-":
        return sys.stdin.buffer.read(), "-"
    return None, path


def _write(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def _pipeline_config(args) -> PipelineConfig:
    formats = None
    if getattr(args, "format", None):
        formats = tuple(dict.fromkeys(f for chunk in args.format for f in chunk.split(",") if f))
    return PipelineConfig.resolve(
        args.config,
        backend=args.labeler,
        endpoint=args.endpoint,
        formats=formats,
        rule_store=getattr(args, "rule_store", None),
        workers=args.workers,
    )


def _records_text(records) -> str:
    return "".join(r.dumps() + "\n" for r in records)


def _single_output(record, fmt: str) -> str:
    value = record.outputs[fmt]
    if fmt == "content_list":
        return json.dumps(value, ensure_ascii=False) + "\n"
    return value if value.endswith("\n") or not value else value + "\n"


def _load_docs(args) -> tuple[list[RawDocument], str]:
    """Documents plus the sniffed input kind (html, jsonl or warc)."""
    data, path = _read_input(args.input)
    if data is None:
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from exc
    return read_documents(path, data), sniff_format(data, "" if path == "-" else path)


def cmd_extract(args) -> int:
    config = _pipeline_config(args)
    docs, kind = _load_docs(args)
    records = run_extract(docs, config, include_html=args.include_html)
    # a lone HTML page with one format prints that output bare
    single = kind == "html" and len(config.formats) == 1 and not args.jsonl and not args.include_html
    if single and records[0].error is None:
        _write(_single_output(records[0], config.formats[0]), args.output)
    else:
        _write(_records_text(records), args.output)
    return _exit_for(records)


def _exit_for(records) -> int:
    if records and all(r.error is not None for r in records):
        for r in records:
            log.error("%s: %s", r.doc_id, r.error)
        return EXIT_FAILED
    return EXIT_OK


def cmd_cluster_extract(args) -> int:
    config = _pipeline_config(args)
    docs, _ = _load_docs(args)
    records, stats = run_cluster_extract(docs, config, include_html=args.include_html)
    _write(_records_text(records), args.output)
    stats_text = json.dumps(stats.to_json(), sort_keys=True)
    if args.stats:
        Path(args.stats).write_text(stats_text + "\n", encoding="utf-8")
    else:
        print(stats_text, file=sys.stderr)
    return _exit_for(records)


def cmd_format(args) -> int:
    data, path = _read_input(args.input)
    raw = data if data is not None else Path(path).read_bytes()
    fmt = args.format
    text = raw.decode("utf-8-sig", errors="replace")
    if args.content_list:
        content = ContentList.from_json(json.loads(text))
        if fmt != "markdown":
            raise UsageError("a content-list input can only be rendered as markdown")
        _write(content_list_to_markdown(content) + "\n", args.output)
        return EXIT_OK
    tree = parse_html(raw)
    if fmt == "plain_text":
        out = main_html_to_plain_text(tree)
    elif fmt == "content_list":
        out = to_content_list(tree).dumps()
    else:
        out = content_list_to_markdown(to_content_list(tree))
    _write(out + "\n", args.output)
    return EXIT_OK


def make_bench_extractor(name: str, config: PipelineConfig | None = None):
    """Markdown extractor over bench records: identity, empty, pipeline or oracle."""
    if name == "identity":
        return lambda rec: rec.gold_markdown
    if name == "empty":
        return lambda rec: ""
    if name == "oracle":
        def oracle(rec: BenchRecord) -> str:
            ex = extract_with_marker(rec.raw_html or rec.html, config.preprocess if config else None, rec.track_id)
            return content_list_to_markdown(to_content_list(ex.main))
        return oracle
    if name == "pipeline":
        config = config or PipelineConfig()
        labeler = make_labeler(config.labeler)

        def pipeline(rec: BenchRecord) -> str:
            ex = extract_main(parse_html(rec.html), labeler, config.preprocess, rec.track_id)
            return content_list_to_markdown(to_content_list(ex.main))
        return pipeline
    raise UsageError(f"unknown extractor {name!r}")


def make_plain_extractor(name: str, config: PipelineConfig | None = None):
    """Plain-text variant used when scoring against main_html text."""
    if name == "identity":
        return lambda rec: main_html_to_plain_text(parse_html(rec.main_html)) if rec.main_html else ""
    if name == "empty":
        return lambda rec: ""
    config = config or PipelineConfig()
    labeler = None if name == "oracle" else make_labeler(config.labeler)

    def run(rec: BenchRecord) -> str:
        if name == "oracle":
            ex = extract_with_marker(rec.raw_html or rec.html, config.preprocess, rec.track_id)
        else:
            ex = extract_main(parse_html(rec.html), labeler, config.preprocess, rec.track_id)
        return main_html_to_plain_text(ex.main)
    return run


def cmd_eval(args) -> int:
    try:
        records = load_bench(args.bench, lenient=args.lenient)
    except SchemaError as exc:
        log.error("schema error: %s", exc)
        return EXIT_INPUT
    except (OSError, ValueError) as exc:
        log.error("cannot load %s: %s", args.bench, exc)
        return EXIT_INPUT
    for err in getattr(records, "errors", []):
        log.warning("skipped: %s", err)
    pconf = _pipeline_config(args)
    tracks = tuple(args.track) if args.track else None
    econf = EvalConfig(metric=args.metric, n=args.n, tracks=tracks, workers=pconf.workers, plain_text=args.plain_text)
    make = make_plain_extractor if args.plain_text else make_bench_extractor
    report = evaluate(make(args.extractor, pconf), records, econf)
    if args.report:
        Path(args.report).write_text(report.dumps() + "\n", encoding="utf-8")
    _write(report.table() + "\n" if not args.json else report.dumps() + "\n", args.output)
    return EXIT_OK


def _load_pairs(path: str) -> list[ComparePair]:
    pairs = []
    text = Path(path).read_text(encoding="utf-8-sig")
    for i, line in enumerate(ln for ln in text.splitlines() if ln.strip()):
        obj = json.loads(line)
        pairs.append(ComparePair(obj.get("html", ""), obj["md_a"], obj["md_b"], str(obj.get("id", i))))
    return pairs


def cmd_compare(args) -> int:
    try:
        pairs = _load_pairs(args.pairs)
        weights = load_weights(args.weights) if args.weights else None
    except (OSError, ValueError, KeyError) as exc:
        log.error("cannot load compare inputs: %s", exc)
        return EXIT_INPUT
    jconf = JudgeConfig(endpoint=args.endpoint, model=args.model, timeout=args.timeout)
    swaps = balanced_swaps(len(pairs), args.seed)

    def judge(pair: ComparePair, i: int) -> int:
        return judge_pair(pair.html, pair.md_a, pair.md_b, jconf, swap=swaps[i]).score
    try:
        summary = compare_pairs(pairs, None if args.dry_run else judge, weights)
    except JudgeUnavailable as exc:
        log.error("judge unavailable: %s", exc)
        return EXIT_FAILED
    except MalformedVerdict as exc:
        log.error("malformed verdict: %s (raw reply: %r)", exc, exc.raw[:200])
        return EXIT_FAILED
    _write(json.dumps(summary.to_json(), sort_keys=True, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_fsm_check(args) -> int:
    text = args.labels
    if text is None:
        data, path = _read_input(args.file or "-")
        text = (data if data is not None else Path(path).read_bytes()).decode("utf-8")
    try:
        seq = parse_label_output(text, args.n)
    except (IllegalToken, LengthMismatch) as exc:
        print(json.dumps({"valid": False, "error": f"{type(exc).__name__}: {exc}"}))
        return EXIT_FAILED
    print(json.dumps({"valid": True, "labels": [l.value for l in seq.labels]}))
    return EXIT_OK


def _add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file (preprocess, labeler, formats, rule_store, workers)")
    p.add_argument("--labeler", choices=("heuristic", "remote", "oracle"), help="block labeler backend")
    p.add_argument("--endpoint", help="remote labeler URL")
    p.add_argument("--workers", type=int, help="worker threads")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mainextract", description="Main-content extraction from HTML.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("--seed", type=int, default=0, help="seed for any randomized step")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="extract main content from HTML, JSONL or WARC input")
    p.add_argument("input", help='input file, or "-" for stdin')
    _add_pipeline_flags(p)
    p.add_argument("--format", action="append", help=f"output format(s), comma separated: {', '.join(FORMATS)}")
    p.add_argument("--jsonl", action="store_true", help="always emit JSONL records")
    p.add_argument("--include-html", action="store_true", help="copy the input html into each record")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("cluster-extract", help="extract a corpus by propagating rules within host clusters")
    p.add_argument("input")
    _add_pipeline_flags(p)
    p.add_argument("--format", action="append")
    p.add_argument("--rule-store", help="directory for per-host rule files")
    p.add_argument("--include-html", action="store_true")
    p.add_argument("--stats", help="write cluster stats JSON here instead of stderr")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_cluster_extract)

    p = sub.add_parser("format", help="render Main-HTML (or a content list) as markdown, content list or text")
    p.add_argument("input")
    p.add_argument("--format", choices=("markdown", "content_list", "plain_text"), default="markdown")
    p.add_argument("--content-list", action="store_true", help="input is a content-list JSON array")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_format)

    p = sub.add_parser("eval", help="score an extractor on a benchmark file")
    p.add_argument("bench")
    _add_pipeline_flags(p)
    p.add_argument("--extractor", choices=("pipeline", "oracle", "identity", "empty"), default="pipeline")
    p.add_argument("--metric", choices=METRICS, default="rouge")
    p.add_argument("--n", type=int, default=5, help="ROUGE n-gram order")
    p.add_argument("--track", action="append", choices=TRACKS)
    p.add_argument("--plain-text", action="store_true", help="score plain text against main_html text")
    p.add_argument("--lenient", action="store_true", help="skip malformed records instead of failing")
    p.add_argument("--report", help="write the report JSON here")
    p.add_argument("--json", action="store_true", help="print JSON instead of a table")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compare", help="pairwise win rates binned by length ratio")
    p.add_argument("pairs", help="JSONL of {html, md_a, md_b}")
    p.add_argument("--dry-run", action="store_true", help="length ratios and bins only")
    p.add_argument("--endpoint", help="judge endpoint (or MAINEXTRACT_JUDGE_URL)")
    p.add_argument("--model")
    p.add_argument("--timeout", type=float, default=60.0)
    p.add_argument("--weights", help="JSON list of 20 bin weights")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("fsm-check", help="validate a label JSON against the block count")
    p.add_argument("--n", type=int, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--labels", help="label JSON text")
    g.add_argument("--file", help='file holding the label JSON ("-" for stdin)')
    p.set_defaults(func=cmd_fsm_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except (UsageError, ValueError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
