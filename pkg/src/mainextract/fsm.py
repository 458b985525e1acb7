"""Finite-state grammar for block label outputs.

The accepted language is exactly ``{"1": V, "2": V, ..., "n": V}`` with
``V`` in ``{"main", "other"}``; whitespace between tokens is ignored.  The
same machine drives two things: validating text returned by a remote
labeler, and producing per-step token masks for a decoder that can apply
them to logits.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "Label",
    "LabelSequence",
    "Phase",
    "FsmState",
    "TokenMask",
    "IllegalToken",
    "LengthMismatch",
    "fsm_start",
    "fsm_allowed",
    "fsm_step",
    "tokenize_output",
    "parse_label_output",
    "canonical_stream",
    "LabelLogitsMasker",
]


class Label(str, Enum):
    MAIN = "main"
    OTHER = "other"

    @property
    def bit(self) -> int:
        return 1 if self is Label.MAIN else 0


@dataclass
class LabelSequence:
    labels: list[Label]
    doc_id: str = ""
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __getitem__(self, i: int) -> Label:
        return self.labels[i]

    def to_json(self) -> dict[str, str]:
        return {str(i): label.value for i, label in enumerate(self.labels, start=1)}


class Phase(Enum):
    START = "Start"
    EXPECT_KEY = "ExpectKey"
    EXPECT_COLON = "ExpectColon"
    EXPECT_VALUE = "ExpectValue"
    AFTER_VALUE = "AfterValue"
    END = "End"


@dataclass(frozen=True)
class FsmState:
    phase: Phase
    index: int
    n_blocks: int

    def __post_init__(self) -> None:
        if self.n_blocks < 1:
            raise ValueError("n_blocks must be >= 1")
        if self.phase in (Phase.START, Phase.END):
            return
        if not 1 <= self.index <= self.n_blocks:
            raise ValueError(f"index {self.index} outside [1, {self.n_blocks}]")


@dataclass(frozen=True)
class TokenMask:
    allowed: frozenset[str]

    def __contains__(self, token: str) -> bool:
        return token in self.allowed


class IllegalToken(ValueError):
    def __init__(self, state: FsmState | None, token: str):
        super().__init__(f"token {token!r} not allowed in state {state}")
        self.state = state
        self.token = token


class LengthMismatch(ValueError):
    pass


VALUE_TOKENS = frozenset({'"main"', '"other"'})


def fsm_start(n_blocks: int) -> FsmState:
    return FsmState(Phase.START, 0, n_blocks)


def fsm_allowed(state: FsmState) -> TokenMask:
    phase, i, n = state.phase, state.index, state.n_blocks
    if phase is Phase.START:
        return TokenMask(frozenset({"{"}))
    if phase is Phase.EXPECT_KEY:
        return TokenMask(frozenset({f'"{i}"'}))
    if phase is Phase.EXPECT_COLON:
        return TokenMask(frozenset({":"}))
    if phase is Phase.EXPECT_VALUE:
        return TokenMask(VALUE_TOKENS)
    if phase is Phase.AFTER_VALUE:
        return TokenMask(frozenset({"}"} if i == n else {","}))
    return TokenMask(frozenset())


def fsm_step(state: FsmState, token: str) -> FsmState:
    if token not in fsm_allowed(state):
        raise IllegalToken(state, token)
    phase, i, n = state.phase, state.index, state.n_blocks
    if phase is Phase.START:
        return FsmState(Phase.EXPECT_KEY, 1, n)
    if phase is Phase.EXPECT_KEY:
        return FsmState(Phase.EXPECT_COLON, i, n)
    if phase is Phase.EXPECT_COLON:
        return FsmState(Phase.EXPECT_VALUE, i, n)
    if phase is Phase.EXPECT_VALUE:
        return FsmState(Phase.AFTER_VALUE, i, n)
    if i == n:
        return FsmState(Phase.END, 0, n)
    return FsmState(Phase.EXPECT_KEY, i + 1, n)


_TOKEN_RE = re.compile(r'\s*(?:([{}:,])|("(?:[^"\\]|\\.)*")|(\S+?(?=[\s{}:,"]|$)))', re.S)


def tokenize_output(text: str) -> list[str]:
    """Split completion text into structural tokens and quoted strings.

    Anything that is neither is still returned as a token so the FSM can
    reject it with a precise state.
    """
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            tokens.append(text[pos:].strip())
            break
        tokens.append(m.group(1) or m.group(2) or m.group(3))
        pos = m.end()
    return tokens


def parse_label_output(text: str, n: int, doc_id: str = "") -> LabelSequence:
    if n < 1:
        raise ValueError("n must be >= 1")
    tokens = tokenize_output(text)
    entries = tokens.count(":")
    if entries != n:
        raise LengthMismatch(f"expected {n} entries, got {entries}")
    state = fsm_start(n)
    labels: list[Label] = []
    for token in tokens:
        state = fsm_step(state, token)
        if state.phase is Phase.AFTER_VALUE:
            labels.append(Label(token.strip('"')))
    if state.phase is not Phase.END:
        raise IllegalToken(state, "<eof>")
    return LabelSequence(labels, doc_id)


def canonical_stream(labels: Iterable[Label | str]) -> list[str]:
    labels = [Label(x) for x in labels]
    out = ["{"]
    for i, label in enumerate(labels, start=1):
        if i > 1:
            out.append(",")
        out += [f'"{i}"', ":", f'"{label.value}"']
    out.append("}")
    return out


class LabelLogitsMasker:
    """Apply the grammar mask to a logits vector.

    ``vocab`` maps each grammar token (``"{"``, ``'"3"'``, ``'"main"'``...)
    to its id in the host model's vocabulary.  Multi-piece tokenizations are
    the host's concern; this class assumes one id per grammar token.
    """

    def __init__(self, n_blocks: int, vocab: Mapping[str, int]):
        self.state = fsm_start(n_blocks)
        self.vocab = dict(vocab)
        self._inverse = {v: k for k, v in self.vocab.items()}

    def __call__(self, logits: np.ndarray) -> np.ndarray:
        masked = np.full_like(logits, -np.inf)
        ids = [self.vocab[t] for t in fsm_allowed(self.state).allowed]
        masked[..., ids] = logits[..., ids]
        return masked

    def advance(self, token_id: int) -> None:
        self.state = fsm_step(self.state, self._inverse.get(token_id, f"<id {token_id}>"))

    @property
    def done(self) -> bool:
        return self.state.phase is Phase.END
