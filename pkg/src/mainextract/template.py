"""Template-aware scaling: label one page per host, replay as XPath rules.

Pages are clustered by full host name.  For each cluster a representative
page goes through the model path once; its block decisions are distilled
into retain/prune selectors which every other member replays on CPU.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence
from urllib.parse import urlsplit

from .dom import DomTree, Element, Node, Text, serialize
from .fsm import Label, LabelSequence
from .labeling import Labeler
from .pipeline import extract_main
from .postprocess import MainHtml, project_kept
from .preprocess import Block, MappingSequence, PreprocessConfig, block_nodes, chunk_blocks
from .selectors import compile_selector, xpath_literal

__all__ = [
    "InvalidUrl",
    "ClusterKey",
    "RepresentativeScore",
    "ExtractionRule",
    "RuleSet",
    "RuleStore",
    "ClusterStats",
    "cluster_key",
    "representative_scores",
    "choose_representative",
    "synthesize_rules",
    "apply_rules",
    "cluster_extract",
]

log = logging.getLogger(__name__)

ALL_BLOCKS_SELECTOR = "/html/body//node()"


class InvalidUrl(ValueError):
    pass


@dataclass(frozen=True)
class ClusterKey:
    host: str

    def __str__(self) -> str:
        return self.host


def cluster_key(url: str) -> ClusterKey:
    """Full subdomain, lowercased, port stripped."""
    try:
        parts = urlsplit(url.strip())
        host = parts.hostname
    except ValueError as exc:
        raise InvalidUrl(url) from exc
    if not parts.scheme or not host:
        raise InvalidUrl(url)
    return ClusterKey(host.lower().rstrip("."))


# --------------------------------------------------------- representative

@dataclass(frozen=True)
class RepresentativeScore:
    tag_variety: int
    attr_variety: int
    dom_depth: int
    dom_width: int
    total: float = 0.0


def _raw_components(tree: DomTree) -> tuple[int, int, int, int]:
    tags: set[str] = set()
    attr_tokens: set[str] = set()
    depth = width = 0
    stack: list[tuple[Element, int]] = [(tree.root, 1)]
    while stack:
        el, d = stack.pop()
        tags.add(el.tag)
        attr_tokens.update("class:" + c for c in el.classes)
        if el.get("id"):
            attr_tokens.add("id:" + el.get("id"))
        kids = el.elements
        depth = max(depth, d)
        width = max(width, len(kids))
        stack.extend((k, d + 1) for k in kids)
    return len(tags), len(attr_tokens), depth, width


def representative_scores(pages: Sequence[DomTree]) -> list[RepresentativeScore]:
    raw = [_raw_components(p) for p in pages]
    lo = [min(col) for col in zip(*raw)]
    hi = [max(col) for col in zip(*raw)]
    scores = []
    for comps in raw:
        total = sum((c - l) / (h - l) if h > l else 0.0 for c, l, h in zip(comps, lo, hi))
        scores.append(RepresentativeScore(*comps, total=total))
    return scores


def choose_representative(pages: Sequence[DomTree]) -> int:
    """Argmax of the normalized score.

    Ties go to the longer serialization, then the lexicographically smaller
    serialization, so the winner does not depend on input order; only
    byte-identical pages fall back to the lowest index.
    """
    if not pages:
        raise ValueError("empty cluster")
    scores = representative_scores(pages)
    texts = [serialize(p) for p in pages]
    return min(range(len(pages)), key=lambda i: (-scores[i].total, -len(texts[i]), texts[i], i))


# ------------------------------------------------------------------ rules

@dataclass(frozen=True)
class ExtractionRule:
    selector: str
    action: str  # "retain" | "prune"
    anchor: str  # "id" | "class" | "positional"

    def __post_init__(self) -> None:
        if self.action not in ("retain", "prune"):
            raise ValueError(f"bad action {self.action!r}")
        compile_selector(self.selector)


@dataclass
class RuleSet:
    cluster: ClusterKey
    rules: list[ExtractionRule]
    representative_doc_id: str = ""
    created_at: float = field(default_factory=time.time)
    degenerate: bool = False
    coverage_ratio: float | None = None

    def to_json(self) -> dict:
        return {
            "cluster": self.cluster.host,
            "rules": [asdict(r) for r in self.rules],
            "representative_doc_id": self.representative_doc_id,
            "created_at": self.created_at,
            "degenerate": self.degenerate,
            "coverage_ratio": self.coverage_ratio,
        }

    @classmethod
    def from_json(cls, data: dict) -> RuleSet:
        rules = [ExtractionRule(**r) for r in data["rules"]]
        return cls(
            cluster=ClusterKey(data["cluster"]),
            rules=rules,
            representative_doc_id=data.get("representative_doc_id", ""),
            created_at=data.get("created_at", 0.0),
            degenerate=data.get("degenerate", False),
            coverage_ratio=data.get("coverage_ratio"),
        )


def _positional_path(node: Node, root: Element) -> str:
    steps = []
    while node is not root:
        parent = node.parent
        if isinstance(node, Text):
            test = "text()"
            pos = 1 + sum(1 for c in parent.children[: parent.children.index(node)] if isinstance(c, Text))
        else:
            test = node.tag
            pos = 1
            for c in parent.children:
                if c is node:
                    break
                if isinstance(c, Element) and c.tag == test:
                    pos += 1
        steps.append(f"{test}[{pos}]")
        node = parent
    steps.append(f"{root.tag}[1]")
    return "/" + "/".join(reversed(steps))


def _quotable(value: str | None) -> bool:
    return bool(value) and not ('"' in value and "'" in value)


def _anchor_selector(el: Element) -> tuple[str, str] | None:
    if _quotable(el.get("id")):
        return f"//{el.tag}[@id={xpath_literal(el.get('id'))}]", "id"
    if _quotable(el.get("class")):
        return f"//{el.tag}[@class={xpath_literal(el.get('class'))}]", "class"
    return None


def _candidates(node: Node, root: Element) -> list[tuple[str, str]]:
    out = []
    if isinstance(node, Element):
        own = _anchor_selector(node)
        if own:
            out.append(own)
    # nearest anchored ancestor + position-free relative path
    rel = ["text()" if isinstance(node, Text) else node.tag]
    cur = node.parent
    while cur is not None and cur is not root:
        if cur.tag in ("body", "html"):
            break
        anchor = _anchor_selector(cur)
        if anchor:
            out.append((anchor[0] + "/" + "/".join(reversed(rel)), anchor[1]))
            break
        rel.append(cur.tag)
        cur = cur.parent
    out.append((_positional_path(node, root), "positional"))
    return out


def _block_roots(tree: DomTree, blocks: Sequence[Block]) -> list[Node]:
    return [block_nodes(tree, b)[0] for b in blocks]


def synthesize_rules(original: DomTree, mapping: MappingSequence, labels: LabelSequence, key: ClusterKey) -> RuleSet:
    """Distill block decisions into selectors.

    Each retained block gets the first candidate (own id, own class,
    anchored ancestor path, positional path) whose matches among this
    page's block roots are all retained; identical selectors merge.  Prune
    rules are added for id/class-anchored discarded blocks that touch no
    retained block, so replay on this page is exact.
    """
    if len(mapping) != len(labels):
        raise ValueError("mapping/labels length mismatch")
    root = original.root
    roots = _block_roots(original, mapping.blocks)
    keep = [label is Label.MAIN for label in labels]
    kept_ids = {id(n) for n, k in zip(roots, keep) if k}
    dropped_ids = {id(n) for n, k in zip(roots, keep) if not k}
    root_ids = kept_ids | dropped_ids

    if not kept_ids:
        return RuleSet(key, [], mapping.doc_id, degenerate=True)
    if not dropped_ids:
        return RuleSet(key, [ExtractionRule(ALL_BLOCKS_SELECTOR, "retain", "positional")], mapping.doc_id)

    cache: dict[str, set[int]] = {}

    def hits(selector: str) -> set[int]:
        if selector not in cache:
            cache[selector] = {id(n) for n in compile_selector(selector).select(root)} & root_ids
        return cache[selector]

    rules: list[ExtractionRule] = []
    seen: set[str] = set()
    for node, k in zip(roots, keep):
        if not k:
            continue
        for selector, anchor in _candidates(node, root):
            if id(node) in hits(selector) and hits(selector) <= kept_ids:
                if selector not in seen:
                    seen.add(selector)
                    rules.append(ExtractionRule(selector, "retain", anchor))
                break
    for node, k in zip(roots, keep):
        if k or not isinstance(node, Element):
            continue
        own = _anchor_selector(node)
        if own and own[0] not in seen and hits(own[0]) <= dropped_ids:
            seen.add(own[0])
            rules.append(ExtractionRule(own[0], "prune", own[1]))
    return RuleSet(key, rules, mapping.doc_id)


def apply_rules(page: DomTree, rules: RuleSet, config: PreprocessConfig | None = None, doc_id: str = "") -> MainHtml:
    """Replay a RuleSet on a page: chunk, match block roots, project. No labeler involved."""
    blocks = chunk_blocks(page, config)
    mapping = MappingSequence(blocks, doc_id)
    if rules.degenerate or not rules.rules:
        main = project_kept(page, mapping, [False] * len(blocks))
        main.flags.update(degenerate=True, coverage_ratio=0.0)
        return main
    roots = _block_roots(page, blocks)
    retain: set[int] = set()
    prune: set[int] = set()
    for rule in rules.rules:
        selected = compile_selector(rule.selector).select(page.root)
        (retain if rule.action == "retain" else prune).update(id(n) for n in selected)
    keep = [id(n) in retain and id(n) not in prune for n in roots]
    matched = sum(1 for n in roots if id(n) in retain or id(n) in prune)
    main = project_kept(page, mapping, keep)
    main.flags["coverage_ratio"] = matched / len(roots) if roots else 0.0
    return main


# ------------------------------------------------------------------ store

class RuleStore:
    """One JSON document per host: ``<dir>/<host>.rules.json``."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)

    def path(self, key: ClusterKey) -> Path:
        return self.directory / f"{key.host}.rules.json"

    def get(self, key: ClusterKey) -> RuleSet | None:
        p = self.path(key)
        if not p.exists():
            return None
        return RuleSet.from_json(json.loads(p.read_text(encoding="utf-8")))

    def put(self, ruleset: RuleSet) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(ruleset.to_json(), fh, ensure_ascii=False, indent=1)
            os.replace(tmp, self.path(ruleset.cluster))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def writable(self) -> bool:
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
        except OSError:
            return False
        return os.access(self.directory, os.W_OK)


class MemoryStore:
    def __init__(self) -> None:
        self._data: dict[str, dict] = {}

    def get(self, key: ClusterKey) -> RuleSet | None:
        data = self._data.get(key.host)
        return RuleSet.from_json(data) if data else None

    def put(self, ruleset: RuleSet) -> None:
        self._data[ruleset.cluster.host] = ruleset.to_json()


# ------------------------------------------------------------------ batch

@dataclass
class ClusterStats:
    clusters: int = 0
    model_calls: int = 0
    rule_applications: int = 0
    degenerate_clusters: int = 0
    fallback_calls: int = 0
    reused_rulesets: int = 0

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class PageResult:
    doc_id: str
    url: str
    main: MainHtml | None = None
    error: str | None = None
    via: str = ""  # "model" | "rules" | "direct"


def cluster_extract(
    pages: Sequence[tuple],
    labeler: Labeler,
    store=None,
    config: PreprocessConfig | None = None,
) -> tuple[list[PageResult], ClusterStats]:
    """Extract a batch of ``(url, tree[, doc_id])`` pages cluster by cluster.

    Results come back in input order.  ``model_calls`` counts representative
    labeler calls; members of degenerate clusters go through the direct
    pipeline and are counted in ``fallback_calls``.
    """
    store = store if store is not None else MemoryStore()
    stats = ClusterStats()
    results: list[PageResult | None] = [None] * len(pages)
    groups: dict[str, list[int]] = {}
    for i, page in enumerate(pages):
        url = page[0]
        doc_id = page[2] if len(page) > 2 else str(i)
        try:
            key = cluster_key(url)
        except InvalidUrl as exc:
            results[i] = PageResult(doc_id, url, error=f"InvalidUrl: {exc}")
            continue
        groups.setdefault(key.host, []).append(i)

    def doc_id_of(i: int) -> str:
        return pages[i][2] if len(pages[i]) > 2 else str(i)

    def direct(i: int) -> PageResult:
        try:
            stats.fallback_calls += 1
            ex = extract_main(pages[i][1], labeler, config, doc_id_of(i))
            return PageResult(doc_id_of(i), pages[i][0], ex.main, via="direct")
        except Exception as exc:  # a bad member must not abort the batch
            return PageResult(doc_id_of(i), pages[i][0], error=f"{type(exc).__name__}: {exc}")

    for host, members in groups.items():
        stats.clusters += 1
        key = ClusterKey(host)
        try:
            ruleset = store.get(key)
        except (OSError, ValueError, KeyError) as exc:
            log.warning("ignoring unreadable rules for %s: %s", host, exc)
            ruleset = None
        rest = members
        if ruleset is not None and not ruleset.degenerate:
            stats.reused_rulesets += 1
        else:
            rep_pos = choose_representative([pages[i][1] for i in members])
            rep = members[rep_pos]
            rest = [i for i in members if i != rep]
            try:
                stats.model_calls += 1
                ex = extract_main(pages[rep][1], labeler, config, doc_id_of(rep))
                results[rep] = PageResult(doc_id_of(rep), pages[rep][0], ex.main, via="model")
                ruleset = synthesize_rules(pages[rep][1], ex.mapping, ex.labels, key)
            except Exception as exc:
                results[rep] = PageResult(doc_id_of(rep), pages[rep][0], error=f"{type(exc).__name__}: {exc}")
                ruleset = None
            if ruleset is not None:
                try:
                    store.put(ruleset)
                except OSError as exc:
                    log.warning("rule store write failed for %s: %s", host, exc)
        if ruleset is None or ruleset.degenerate:
            stats.degenerate_clusters += 1
            for i in rest:
                results[i] = direct(i)
            continue
        coverages = []
        for i in rest:
            try:
                main = apply_rules(pages[i][1], ruleset, config, doc_id_of(i))
                stats.rule_applications += 1
                coverages.append(main.flags.get("coverage_ratio", 0.0))
                results[i] = PageResult(doc_id_of(i), pages[i][0], main, via="rules")
            except Exception as exc:
                results[i] = PageResult(doc_id_of(i), pages[i][0], error=f"{type(exc).__name__}: {exc}")
        if coverages:
            ruleset.coverage_ratio = sum(coverages) / len(coverages)
            try:
                store.put(ruleset)
            except OSError as exc:
                log.warning("rule store write failed for %s: %s", host, exc)
    return [r for r in results], stats
