"""Per-document scoring and track-level aggregation."""

from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

from ..dom import parse_html
from ..formatter.render import main_html_to_plain_text
from .bench import TRACKS, BenchRecord, record_tracks
from .metrics import edit_similarity, rouge_n_f1
from .structured import element_scores

__all__ = ["EvalConfig", "MetricReport", "METRICS", "evaluate", "score_document"]

log = logging.getLogger(__name__)

METRICS = ("rouge", "editsim", "code", "formula", "teds")


@dataclass
class EvalConfig:
    metric: str = "rouge"
    n: int = 5
    tracks: tuple[str, ...] | None = None
    workers: int = 1
    # compare against plain text rendered from main_html instead of Markdown
    plain_text: bool = False

    def __post_init__(self) -> None:
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}; choose from {METRICS}")
        if self.tracks is not None:
            bad = [t for t in self.tracks if t not in TRACKS]
            if bad:
                raise ValueError(f"unknown track(s) {bad}; choose from {TRACKS}")
            self.tracks = tuple(self.tracks)
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass
class MetricReport:
    metric_name: str
    overall: float
    by_track: dict[str, float]
    per_doc: list[tuple[str, float]]
    n_docs: int
    errors: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        d = asdict(self)
        d["per_doc"] = [[t, s] for t, s in self.per_doc]
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False, sort_keys=True, indent=2)

    def table(self) -> str:
        lines = [f"metric: {self.metric_name}   docs: {self.n_docs}", f"{'track':<16}{'score':>10}"]
        lines.append(f"{'overall':<16}{self.overall:>10.4f}")
        for track in TRACKS:
            if track in self.by_track:
                lines.append(f"{track:<16}{self.by_track[track]:>10.4f}")
        return "\n".join(lines)


def _gold(rec: BenchRecord, config: EvalConfig) -> str:
    if config.plain_text:
        return main_html_to_plain_text(parse_html(rec.main_html)) if rec.main_html else ""
    if config.metric in ("code", "formula", "teds") and rec.groundtruth_content:
        return rec.groundtruth_content
    return rec.gold_markdown


def score_document(pred: str, gold: str, config: EvalConfig) -> float | None:
    """Score one prediction; None when the gold has nothing of the measured kind."""
    if config.metric == "rouge":
        return rouge_n_f1(pred, gold, config.n)
    if config.metric == "editsim":
        return edit_similarity(pred, gold)
    key = {"code": "code", "formula": "formula", "teds": "table"}[config.metric]
    return element_scores(pred, gold)[key]


def _run_one(extractor: Callable[[BenchRecord], str], rec: BenchRecord, config: EvalConfig):
    gold = _gold(rec, config)
    try:
        pred = extractor(rec)
        if not isinstance(pred, str):
            raise TypeError(f"extractor returned {type(pred).__name__}, expected str")
    except Exception as exc:  # a failing document must not abort the run
        log.warning("extractor failed on %s: %s", rec.track_id, exc)
        score = score_document("", gold, config)
        return (0.0 if score is not None else None), f"{type(exc).__name__}: {exc}"
    return score_document(pred, gold, config), None


def evaluate(extractor: Callable[[BenchRecord], str], records: Sequence[BenchRecord], config: EvalConfig | None = None) -> MetricReport:
    """Mean per-document score overall and per track (macro average)."""
    config = config or EvalConfig()
    selected = []
    for rec in records:
        tracks = record_tracks(rec)
        if config.tracks is not None:
            tracks = [t for t in tracks if t in config.tracks]
            if not tracks:
                continue
        selected.append((rec, tracks))

    if config.workers > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            results = list(pool.map(lambda rt: _run_one(extractor, rt[0], config), selected))
    else:
        results = [_run_one(extractor, rec, config) for rec, _ in selected]

    per_doc: list[tuple[str, float]] = []
    track_scores: dict[str, list[float]] = {}
    errors = []
    for (rec, tracks), (score, err) in zip(selected, results):
        if err is not None:
            errors.append({"track_id": rec.track_id, "error": err})
        if score is None:
            continue
        per_doc.append((rec.track_id, score))
        for t in tracks:
            track_scores.setdefault(t, []).append(score)
    overall = math.fsum(s for _, s in per_doc) / len(per_doc) if per_doc else 0.0
    by_track = {t: math.fsum(v) / len(v) for t, v in sorted(track_scores.items(), key=lambda kv: TRACKS.index(kv[0]))}
    return MetricReport(config.metric, overall, by_track, per_doc, len(per_doc), errors)
