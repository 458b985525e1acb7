"""Pairwise extraction judge client."""

from __future__ import annotations

import json
import logging
import os
import random
import urllib.error
import urllib.request
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Callable, Sequence

__all__ = [
    "JudgeConfig",
    "Verdict",
    "JudgeUnavailable",
    "MalformedVerdict",
    "MODULE_TYPES",
    "rating_prompt",
    "parse_verdict",
    "judge_pair",
    "judge_batch",
    "balanced_swaps",
]

log = logging.getLogger(__name__)

ENV_JUDGE_URL = "MAINEXTRACT_JUDGE_URL"
PROMPT_ASSET = "rating_prompt.v1.txt"
MODULE_TYPES = ("code", "math", "table", "image", "list", "title", "paragraph", "other")


class JudgeUnavailable(ConnectionError):
    pass


class MalformedVerdict(ValueError):
    def __init__(self, message: str, raw: str):
        super().__init__(message)
        self.raw = raw


@dataclass
class JudgeConfig:
    endpoint: str | None = None
    model: str | None = None
    timeout: float = 60.0
    max_retries: int = 1

    def resolved_endpoint(self) -> str:
        endpoint = self.endpoint or os.environ.get(ENV_JUDGE_URL)
        if not endpoint:
            raise JudgeUnavailable("no judge endpoint configured")
        return endpoint


@dataclass
class Verdict:
    score: int  # 1: first markdown better, 2: second better (in caller's order)
    name: str
    reason: str
    swapped: bool = False
    raw: str = ""


@lru_cache(maxsize=None)
def _template() -> str:
    return resources.files("mainextract.data").joinpath(PROMPT_ASSET).read_text("utf-8")


def rating_prompt(html: str, md_a: str, md_b: str) -> str:
    """Fill the three fenced slots of the rating prompt in order."""
    pieces = _template().split("{}")
    if len(pieces) != 4:
        raise RuntimeError("rating prompt asset must contain exactly three {} slots")
    return pieces[0] + html + pieces[1] + md_a + pieces[2] + md_b + pieces[3]


def parse_verdict(reply: str) -> Verdict:
    try:
        obj = json.loads(reply.strip())
    except json.JSONDecodeError as exc:
        raise MalformedVerdict(f"reply is not JSON: {exc.msg}", reply) from None
    if not isinstance(obj, dict) or set(obj) != {"score", "name", "reason"}:
        raise MalformedVerdict("reply must be an object with exactly score, name, reason", reply)
    score, name, reason = obj["score"], obj["name"], obj["reason"]
    if isinstance(score, bool) or score not in (1, 2):
        raise MalformedVerdict(f"score must be 1 or 2, got {score!r}", reply)
    if name not in MODULE_TYPES:
        raise MalformedVerdict(f"name {name!r} is not a module type", reply)
    if not isinstance(reason, str):
        raise MalformedVerdict("reason must be a string", reply)
    return Verdict(score, name, reason, raw=reply)


def _reply_text(body: str) -> str:
    """Unwrap chat-completion responses; plain bodies pass through."""
    try:
        obj = json.loads(body)
    except json.JSONDecodeError:
        return body
    if isinstance(obj, dict) and isinstance(obj.get("choices"), list) and obj["choices"]:
        msg = obj["choices"][0].get("message") or {}
        return msg.get("content", "")
    return body


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
        raise JudgeUnavailable(str(exc)) from exc


Poster = Callable[[str, dict, float], str]


def judge_pair(html: str, md_a: str, md_b: str, config: JudgeConfig, swap: bool = False, post: Poster = _post) -> Verdict:
    """Ask the judge which markdown is better; ``swap`` presents B first.

    The returned score always refers to the caller's (md_a, md_b) order.
    """
    endpoint = config.resolved_endpoint()
    first, second = (md_b, md_a) if swap else (md_a, md_b)
    payload = {"messages": [{"role": "user", "content": rating_prompt(html, first, second)}], "temperature": 0}
    if config.model:
        payload["model"] = config.model
    last: Exception | None = None
    for attempt in range(config.max_retries + 1):
        try:
            body = post(endpoint, payload, config.timeout)
            break
        except JudgeUnavailable as exc:
            last = exc
            log.warning("judge attempt %d failed: %s", attempt + 1, exc)
    else:
        raise JudgeUnavailable(f"judge unreachable after {config.max_retries + 1} attempts: {last}")
    verdict = parse_verdict(_reply_text(body))
    if swap:
        verdict.score = 3 - verdict.score
        verdict.swapped = True
    return verdict


def balanced_swaps(n: int, seed: int) -> list[bool]:
    """Seeded presentation order with floor(n/2) swapped pairs."""
    flags = [True] * (n // 2) + [False] * (n - n // 2)
    random.Random(seed).shuffle(flags)
    return flags


def judge_batch(pairs: Sequence[tuple[str, str, str]], config: JudgeConfig, seed: int = 0, post: Poster = _post) -> list[Verdict]:
    swaps = balanced_swaps(len(pairs), seed)
    return [judge_pair(h, a, b, config, swap=s, post=post) for (h, a, b), s in zip(pairs, swaps)]
