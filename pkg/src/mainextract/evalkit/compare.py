"""Pairwise win rates binned by length ratio."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from .metrics import length_ratio

__all__ = ["N_BINS", "ComparePair", "BinStat", "CompareSummary", "bin_index", "bin_edges", "load_weights", "compare_pairs"]

N_BINS = 20


@dataclass
class ComparePair:
    html: str
    md_a: str
    md_b: str
    pair_id: str = ""


@dataclass
class BinStat:
    lo: float
    hi: float
    count: int = 0
    wins_a: int = 0

    @property
    def win_rate(self) -> float | None:
        return self.wins_a / self.count if self.count else None


@dataclass
class CompareSummary:
    bins: list[BinStat]
    ratios: list[float]
    judged: bool
    overall_win_rate: float | None = None
    weighted_win_rate: float | None = None
    verdicts: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "judged": self.judged,
            "overall_win_rate": self.overall_win_rate,
            "weighted_win_rate": self.weighted_win_rate,
            "bins": [dict(asdict(b), win_rate=b.win_rate) for b in self.bins],
            "ratios": self.ratios,
            "verdicts": self.verdicts,
        }


def bin_edges() -> list[tuple[float, float]]:
    return [(round(-1 + i / 10, 10), round(-1 + (i + 1) / 10, 10)) for i in range(N_BINS)]


def bin_index(ratio: float) -> int:
    """Equal-width bin over [-1, 1]; the right edge belongs to the last bin."""
    if not -1.0 <= ratio <= 1.0:
        raise ValueError(f"length ratio {ratio} outside [-1, 1]")
    # rounding absorbs float error at the edges (e.g. -0.7 + 1 != 0.3 exactly)
    return min(N_BINS - 1, math.floor(round((ratio + 1.0) * 10, 9)))


def load_weights(path) -> list[float]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(data, dict):
        data = data.get("weights")
    if not isinstance(data, list) or len(data) != N_BINS:
        raise ValueError(f"weights file must hold a list of {N_BINS} numbers")
    weights = [float(w) for w in data]
    if any(w < 0 for w in weights) or not any(weights):
        raise ValueError("weights must be non-negative and not all zero")
    return weights


def compare_pairs(pairs: Sequence[ComparePair], judge: Callable[[ComparePair, int], int] | None = None,
                  weights: Sequence[float] | None = None) -> CompareSummary:
    """Bin pairs by length ratio of (md_a, md_b); with a judge, also win rates of A.

    ``judge(pair, index)`` returns 1 when A wins and 2 when B wins.
    """
    bins = [BinStat(lo, hi) for lo, hi in bin_edges()]
    ratios = []
    verdicts = []
    wins_total = 0
    for i, pair in enumerate(pairs):
        r = length_ratio(len(pair.md_a), len(pair.md_b))
        ratios.append(r)
        b = bins[bin_index(r)]
        b.count += 1
        if judge is not None:
            score = judge(pair, i)
            if score not in (1, 2):
                raise ValueError(f"judge returned {score!r}")
            verdicts.append({"pair_id": pair.pair_id or str(i), "ratio": r, "score": score})
            if score == 1:
                b.wins_a += 1
                wins_total += 1
    summary = CompareSummary(bins, ratios, judge is not None, verdicts=verdicts)
    if judge is not None and pairs:
        summary.overall_win_rate = wins_total / len(pairs)
        w = list(weights) if weights is not None else [1.0] * N_BINS
        used = [(wt, b.win_rate) for wt, b in zip(w, bins) if b.count and wt > 0]
        total_w = math.fsum(wt for wt, _ in used)
        summary.weighted_win_rate = math.fsum(wt * rate for wt, rate in used) / total_w if total_w else None
    return summary
