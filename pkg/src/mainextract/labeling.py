"""Block labelers: CPU heuristic, remote model client, and ground-truth oracle.

Every labeler maps a ``SimplifiedSequence`` to a ``LabelSequence`` of equal
length.  Labels only ever index existing blocks, so no labeler can inject
text into the output.
"""

from __future__ import annotations

import json
import logging
import os
import re
import urllib.error
import urllib.request
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Callable, Protocol, Sequence

from .dom import DomTree, Element, parse_fragment, visible_text
from .fsm import IllegalToken, Label, LabelSequence, LengthMismatch, parse_label_output
from .preprocess import (
    EMPTY_PLACEHOLDER,
    HEADING_TAGS,
    BlockKind,
    MappingSequence,
    SimplifiedBlock,
    SimplifiedSequence,
    block_nodes,
)

__all__ = [
    "LabelerConfig",
    "Labeler",
    "HeuristicLabeler",
    "RemoteLabeler",
    "OracleLabeler",
    "TransportError",
    "label_heuristic",
    "label_remote",
    "labels_from_marker",
    "build_prompt",
    "make_labeler",
]

log = logging.getLogger(__name__)

ENV_LABELER_URL = "MAINEXTRACT_LABELER_URL"
PROMPT_TEMPLATE = "label_prompt.v1.txt"
_MARKER_RE = re.compile(r"…\(\+\d+ (?:cells|items)\)")
_TOKEN_SPLIT = re.compile(r"[^a-z0-9]+")


class TransportError(ConnectionError):
    pass


@dataclass
class LabelerConfig:
    backend: str = "heuristic"
    endpoint: str | None = None
    timeout: float = 30.0
    max_retries: int = 1
    fallback: bool = True
    min_text_len: int = 80
    max_link_density: float = 0.5

    def __post_init__(self) -> None:
        if self.backend not in ("heuristic", "remote", "oracle"):
            raise ValueError(f"unknown labeler backend {self.backend!r}")
        if self.backend == "remote" and not self.endpoint:
            self.endpoint = os.environ.get(ENV_LABELER_URL)
            if not self.endpoint:
                raise ValueError("remote labeler requires an endpoint")


class Labeler(Protocol):
    def label(self, seq: SimplifiedSequence) -> LabelSequence: ...


@lru_cache(maxsize=None)
def _keywords() -> tuple[frozenset[str], frozenset[str]]:
    data = json.loads(resources.files("mainextract.data").joinpath("keywords.json").read_text("utf-8"))
    return frozenset(data["boilerplate"]), frozenset(data["content"])


@dataclass
class BlockFeatures:
    text_len: int
    link_density: float
    boilerplate_hit: bool
    content_hit: bool
    heading: bool


def block_features(block: SimplifiedBlock) -> BlockFeatures:
    if block.text == EMPTY_PLACEHOLDER:
        return BlockFeatures(0, 0.0, False, False, False)
    nodes = parse_fragment(_MARKER_RE.sub("", block.text))
    text = " ".join(visible_text(n) for n in nodes).strip()
    link_chars = 0
    tokens: set[str] = set()
    heading = False
    for node in nodes:
        if not isinstance(node, Element):
            continue
        heading = heading or node.tag in HEADING_TAGS
        for el in node.iter_elements():
            if el.tag == "a":
                link_chars += len(visible_text(el))
            for attr in ("class", "id"):
                tokens.update(t for t in _TOKEN_SPLIT.split((el.get(attr) or "").lower()) if t)
    boiler, content = _keywords()
    n = len(text)
    return BlockFeatures(
        text_len=n,
        link_density=link_chars / n if n else 0.0,
        boilerplate_hit=bool(tokens & boiler),
        content_hit=bool(tokens & content),
        heading=heading,
    )


def _heuristic_one(block: SimplifiedBlock, config: LabelerConfig) -> Label:
    f = block_features(block)
    if f.text_len == 0 and block.kind is not BlockKind.MEDIA:
        return Label.OTHER
    if f.content_hit:
        return Label.MAIN
    if f.boilerplate_hit or f.link_density > config.max_link_density:
        return Label.OTHER
    # headings and structured blocks carry little text but are rarely boilerplate
    long_enough = f.text_len >= config.min_text_len or f.heading or block.kind in (BlockKind.PRE, BlockKind.TABLE)
    return Label.MAIN if long_enough else Label.OTHER


def label_heuristic(seq: SimplifiedSequence, config: LabelerConfig | None = None) -> LabelSequence:
    config = config or LabelerConfig()
    return LabelSequence([_heuristic_one(b, config) for b in seq.blocks], seq.doc_id)


class HeuristicLabeler:
    def __init__(self, config: LabelerConfig | None = None):
        self.config = config or LabelerConfig()

    def label(self, seq: SimplifiedSequence) -> LabelSequence:
        return label_heuristic(seq, self.config)


# ------------------------------------------------------------------ remote

@lru_cache(maxsize=None)
def _prompt_template() -> str:
    return resources.files("mainextract.data").joinpath(PROMPT_TEMPLATE).read_text("utf-8")


def build_prompt(seq: SimplifiedSequence) -> str:
    lines = "\n".join(f"{b.index}\t{b.text}" for b in seq.blocks)
    return _prompt_template().replace("{blocks}", lines)


def _post(endpoint: str, payload: dict, timeout: float) -> str:
    req = urllib.request.Request(
        endpoint,
        data=json.dumps(payload).encode("utf-8"),
        headers={"Content-Type": "application/json"},
        method="POST",
    )
    try:
        with urllib.request.urlopen(req, timeout=timeout) as resp:
            return resp.read().decode("utf-8")
    except (urllib.error.URLError, TimeoutError, OSError) as exc:
        raise TransportError(str(exc)) from exc


def label_remote(seq: SimplifiedSequence, config: LabelerConfig, post: Callable[[str, dict, float], str] = _post) -> LabelSequence:
    """Ask a remote model for labels and validate the reply with the FSM.

    Invalid replies and transport failures are retried ``max_retries``
    times; after that the heuristic labels are returned with
    ``meta["fallback"] = True`` unless fallback is disabled.
    """
    payload = {
        "doc_id": seq.doc_id,
        "blocks": [{"index": b.index, "text": b.text} for b in seq.blocks],
        "prompt": build_prompt(seq),
    }
    last_error: Exception | None = None
    for attempt in range(config.max_retries + 1):
        try:
            reply = post(config.endpoint, payload, config.timeout)
            result = parse_label_output(reply, len(seq), seq.doc_id)
            result.meta.update(retry_count=attempt, fallback=False)
            return result
        except (IllegalToken, LengthMismatch, TransportError) as exc:
            last_error = exc
            log.warning("remote labeler attempt %d for %r failed: %s", attempt + 1, seq.doc_id, exc)
    if not config.fallback:
        if isinstance(last_error, TransportError):
            raise last_error
        raise TransportError(f"no valid reply after {config.max_retries + 1} attempts: {last_error}")
    result = label_heuristic(seq, config)
    result.meta.update(retry_count=config.max_retries, fallback=True, error=str(last_error))
    return result


class RemoteLabeler:
    def __init__(self, config: LabelerConfig, post: Callable[[str, dict, float], str] = _post):
        self.config = config
        self._post = post

    def label(self, seq: SimplifiedSequence) -> LabelSequence:
        return label_remote(seq, self.config, self._post)


# ------------------------------------------------------------------ oracle

def labels_from_marker(marked: DomTree, mapping: MappingSequence, attr: str = "cc-select") -> LabelSequence:
    """Ground-truth labels from annotation markers left in the raw page.

    A block is main when its root, one of its ancestors, or one of its
    descendants carries ``attr``.
    """
    labels = []
    for block in mapping.blocks:
        nodes = block_nodes(marked, block)
        hit = False
        cur = nodes[0].parent
        while cur is not None and not hit:
            hit = cur.has(attr)
            cur = cur.parent
        for node in nodes:
            if hit:
                break
            if isinstance(node, Element):
                hit = any(el.has(attr) for el in node.iter_elements())
        labels.append(Label.MAIN if hit else Label.OTHER)
    return LabelSequence(labels, mapping.doc_id)


class OracleLabeler:
    """Replays known labels keyed by ``doc_id``."""

    def __init__(self, labels: dict[str, Sequence[Label | str]] | None = None):
        self.labels = {k: [Label(x) for x in v] for k, v in (labels or {}).items()}

    def add(self, doc_id: str, labels: Sequence[Label | str]) -> None:
        self.labels[doc_id] = [Label(x) for x in labels]

    def label(self, seq: SimplifiedSequence) -> LabelSequence:
        try:
            labels = self.labels[seq.doc_id]
        except KeyError:
            raise KeyError(f"oracle has no labels for {seq.doc_id!r}") from None
        if len(labels) != len(seq):
            raise LengthMismatch(f"oracle has {len(labels)} labels for {len(seq)} blocks")
        return LabelSequence(list(labels), seq.doc_id)


def make_labeler(config: LabelerConfig) -> Labeler:
    if config.backend == "heuristic":
        return HeuristicLabeler(config)
    if config.backend == "remote":
        return RemoteLabeler(config)
    return OracleLabeler()
