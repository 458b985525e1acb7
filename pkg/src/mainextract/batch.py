"""Corpus-level extraction shared by the command line and library callers."""

from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .dom import DomTree, decode_html, parse_html, serialize
from .formatter import content_list_to_markdown, main_html_to_plain_text, to_content_list
from .ingest import RawDocument
from .labeling import ENV_LABELER_URL, LabelerConfig, OracleLabeler, labels_from_marker, make_labeler
from .pipeline import extract_main, strip_attribute
from .postprocess import MainHtml
from .preprocess import PreprocessConfig, preprocess
from .template import ClusterStats, MemoryStore, RuleStore, cluster_extract

__all__ = ["FORMATS", "PipelineConfig", "DocRecord", "render_outputs", "process_document", "run_extract", "run_cluster_extract"]

log = logging.getLogger(__name__)

FORMATS = ("main_html", "content_list", "markdown", "plain_text")
MARKER_ATTR = "cc-select"


@dataclass
class PipelineConfig:
    preprocess: PreprocessConfig = field(default_factory=PreprocessConfig)
    labeler: LabelerConfig = field(default_factory=LabelerConfig)
    formats: tuple[str, ...] = ("markdown",)
    rule_store: str | None = None
    workers: int = 1

    def __post_init__(self) -> None:
        self.formats = tuple(self.formats)
        if not self.formats:
            raise ValueError("at least one output format is required")
        bad = [f for f in self.formats if f not in FORMATS]
        if bad:
            raise ValueError(f"unknown output format(s) {bad}; choose from {FORMATS}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @classmethod
    def resolve(cls, config_file: str | None = None, env: Mapping[str, str] | None = None, **flags) -> "PipelineConfig":
        """Merge settings with precedence flags > environment > config file > defaults.

        ``flags`` holds command-line values; None means "not given".
        """
        env = os.environ if env is None else env
        data: dict = json.loads(Path(config_file).read_text(encoding="utf-8")) if config_file else {}
        pre = dict(data.get("preprocess") or {})
        lab = dict(data.get("labeler") or {})
        top = {k: data[k] for k in ("formats", "rule_store", "workers") if k in data}

        if env.get("MAINEXTRACT_LABELER"):
            lab["backend"] = env["MAINEXTRACT_LABELER"]
        if env.get(ENV_LABELER_URL):
            lab["endpoint"] = env[ENV_LABELER_URL]
        if env.get("MAINEXTRACT_WORKERS"):
            top["workers"] = int(env["MAINEXTRACT_WORKERS"])
        if env.get("MAINEXTRACT_RULE_STORE"):
            top["rule_store"] = env["MAINEXTRACT_RULE_STORE"]

        for key in ("backend", "endpoint", "timeout", "max_retries"):
            if flags.get(key) is not None:
                lab[key] = flags[key]
        for key in ("formats", "rule_store", "workers"):
            if flags.get(key) is not None:
                top[key] = flags[key]
        return cls(
            preprocess=PreprocessConfig.from_dict(pre),
            labeler=LabelerConfig(**lab),
            **top,
        )


@dataclass
class DocRecord:
    doc_id: str
    url: str
    outputs: dict = field(default_factory=dict)
    error: str | None = None
    html: str | None = None

    def to_json(self) -> dict:
        out = {"doc_id": self.doc_id, "url": self.url}
        if self.html is not None:
            out["html"] = self.html
        if self.error is not None:
            out["error"] = self.error
        else:
            out.update(self.outputs)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False)


def render_outputs(main: MainHtml, formats: Sequence[str]) -> dict:
    out: dict = {}
    content = None
    for fmt in formats:
        if fmt == "main_html":
            out[fmt] = serialize(main.tree)
        elif fmt == "plain_text":
            out[fmt] = main_html_to_plain_text(main)
        else:
            if content is None:
                content = to_content_list(main)
            out[fmt] = content.to_json() if fmt == "content_list" else content_list_to_markdown(content)
    return out


def _oracle_inputs(marked: DomTree, config: PipelineConfig, doc_id: str) -> tuple[DomTree, OracleLabeler]:
    """Marker-free tree plus a labeler replaying the markers' labels."""
    clean = strip_attribute(marked, MARKER_ATTR)
    _, mapping = preprocess(clean, config.preprocess, doc_id)
    oracle = OracleLabeler()
    oracle.add(doc_id, labels_from_marker(marked, mapping, MARKER_ATTR).labels)
    return clean, oracle


def _html_text(doc: RawDocument) -> str | None:
    if isinstance(doc.html, bytes):
        return decode_html(doc.html, doc.encoding)
    return doc.html


def process_document(doc: RawDocument, config: PipelineConfig, labeler=None, include_html: bool = False) -> DocRecord:
    html = _html_text(doc) if include_html else None
    if doc.error is not None:
        return DocRecord(doc.doc_id, doc.url, error=doc.error, html=html)
    try:
        tree = parse_html(doc.html, doc.encoding)
        if config.labeler.backend == "oracle":
            tree, labeler = _oracle_inputs(tree, config, doc.doc_id)
        elif labeler is None:
            labeler = make_labeler(config.labeler)
        ex = extract_main(tree, labeler, config.preprocess, doc.doc_id)
        return DocRecord(doc.doc_id, doc.url, render_outputs(ex.main, config.formats), html=html)
    except Exception as exc:  # one bad document never stops the batch
        log.warning("document %s failed: %s", doc.doc_id, exc)
        return DocRecord(doc.doc_id, doc.url, error=f"{type(exc).__name__}: {exc}", html=html)


def run_extract(docs: Sequence[RawDocument], config: PipelineConfig, include_html: bool = False) -> list[DocRecord]:
    """Process documents; results follow input order whatever the worker count."""
    labeler = None if config.labeler.backend == "oracle" else make_labeler(config.labeler)
    if config.workers == 1:
        return [process_document(d, config, labeler, include_html) for d in docs]
    with ThreadPoolExecutor(config.workers) as pool:
        return list(pool.map(lambda d: process_document(d, config, labeler, include_html), docs))



def run_cluster_extract(docs: Sequence[RawDocument], config: PipelineConfig, include_html: bool = False) -> tuple[list[DocRecord], ClusterStats]:
    """Template-scaled extraction; a read-only rule store degrades to per-document extraction."""
    store = MemoryStore()
    if config.rule_store:
        disk = RuleStore(config.rule_store)
        if not disk.writable():
            log.warning("rule store %s is not writable; extracting every document directly", config.rule_store)
            records = run_extract(docs, config, include_html)
            stats = ClusterStats(fallback_calls=sum(1 for d in docs if d.error is None))
            return records, stats
        store = disk

    oracle = config.labeler.backend == "oracle"
    labeler = OracleLabeler() if oracle else make_labeler(config.labeler)
    pages, positions = [], []
    records: list[DocRecord | None] = [None] * len(docs)
    for i, doc in enumerate(docs):
        html = _html_text(doc) if include_html else None
        if doc.error is not None:
            records[i] = DocRecord(doc.doc_id, doc.url, error=doc.error, html=html)
            continue
        try:
            tree = parse_html(doc.html, doc.encoding)
            if oracle:
                tree, one = _oracle_inputs(tree, config, doc.doc_id)
                labeler.labels.update(one.labels)
        except Exception as exc:
            records[i] = DocRecord(doc.doc_id, doc.url, error=f"{type(exc).__name__}: {exc}", html=html)
            continue
        pages.append((doc.url, tree, doc.doc_id))
        positions.append(i)

    results, stats = cluster_extract(pages, labeler, store, config.preprocess)
    for pos, res in zip(positions, results):
        doc = docs[pos]
        html = _html_text(doc) if include_html else None
        if res.error is not None:
            records[pos] = DocRecord(res.doc_id, res.url, error=res.error, html=html)
            continue
        try:
            records[pos] = DocRecord(res.doc_id, res.url, render_outputs(res.main, config.formats), html=html)
        except Exception as exc:
            records[pos] = DocRecord(res.doc_id, res.url, error=f"{type(exc).__name__}: {exc}", html=html)
    return records, stats
