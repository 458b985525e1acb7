import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mainextract.fsm import (
    IllegalToken, Label, LabelLogitsMasker, LengthMismatch, Phase, canonical_stream, fsm_allowed, fsm_start,
    fsm_step, parse_label_output,
)


def test_parse_two_blocks():
    seq = parse_label_output('{"1":"main","2":"other"}', 2)
    assert seq.labels == [Label.MAIN, Label.OTHER]


def test_whitespace_is_tolerated():
    seq = parse_label_output('{ "1" : "main" ,\n "2":"main" }', 2)
    assert seq.labels == [Label.MAIN, Label.MAIN]


def test_wrong_value_is_illegal():
    with pytest.raises(IllegalToken):
        parse_label_output('{"1":"maybe"}', 1)


def test_out_of_order_key_is_illegal():
    with pytest.raises(IllegalToken):
        parse_label_output('{"2":"main","1":"other"}', 2)


def test_short_output_is_length_mismatch():
    with pytest.raises(LengthMismatch):
        parse_label_output('{"1":"main"}', 2)
    with pytest.raises(LengthMismatch):
        parse_label_output("{}", 1)


def test_start_only_allows_brace():
    assert fsm_allowed(fsm_start(3)).allowed == frozenset({"{"})


def test_after_last_value_only_close():
    state = fsm_start(1)
    for tok in ["{", '"1"', ":", '"other"']:
        state = fsm_step(state, tok)
    assert fsm_allowed(state).allowed == frozenset({"}"})
    assert fsm_step(state, "}").phase is Phase.END


def test_logits_masker_drives_valid_output():
    vocab = {t: i for i, t in enumerate(["{", "}", ":", ",", '"main"', '"other"', '"1"', '"2"', '"3"', "junk"])}
    masker = LabelLogitsMasker(3, vocab)
    rng = np.random.default_rng(0)
    out = []
    while not masker.done:
        logits = masker(rng.normal(size=len(vocab)))
        tok = int(np.argmax(logits))
        assert np.isfinite(logits[tok])
        out.append(tok)
        masker.advance(tok)
    inverse = {v: k for k, v in vocab.items()}
    text = "".join(inverse[t] for t in out)
    assert len(parse_label_output(text, 3)) == 3


@given(st.lists(st.sampled_from(["main", "other"]), min_size=1, max_size=12))
def test_canonical_stream_round_trip(labels):
    text = "".join(canonical_stream(labels))
    assert json.loads(text) == {str(i): v for i, v in enumerate(labels, 1)}
    assert [l.value for l in parse_label_output(text, len(labels))] == labels
