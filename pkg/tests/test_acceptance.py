"""End-to-end acceptance checks, one test per criterion.

Each test records a one-line PASS/FAIL verdict; the lines are printed in
the pytest terminal summary and when this file is run as a script.
"""

import json
import math
import os
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

from mainextract.batch import PipelineConfig, run_extract  # noqa: E402
from mainextract.cli import make_bench_extractor  # noqa: E402
from mainextract.dom import is_subtree, parse_html, serialize, tree_equal, visible_text  # noqa: E402
from mainextract.evalkit.bench import load_bench  # noqa: E402
from mainextract.evalkit.metrics import TreeNode, edit_similarity, rouge_n_f1, tokenize, tree_edit_distance  # noqa: E402
from mainextract.evalkit.report import EvalConfig, evaluate  # noqa: E402
from mainextract.formatter import content_list_to_markdown, to_content_list  # noqa: E402
from mainextract.fsm import (  # noqa: E402
    IllegalToken, Label, LabelSequence, Phase, canonical_stream, fsm_allowed, fsm_start, fsm_step, parse_label_output,
)
from mainextract.ingest import read_documents  # noqa: E402
from mainextract.labeling import HeuristicLabeler  # noqa: E402
from mainextract.pipeline import extract_main, extract_with_marker, strip_attribute  # noqa: E402
from mainextract.postprocess import project_labels, validate_main_html  # noqa: E402
from mainextract.preprocess import EmptyDocument, block_text, preprocess  # noqa: E402
from mainextract.template import apply_rules, choose_representative, cluster_extract, cluster_key, synthesize_rules  # noqa: E402
from oracles import levenshtein_full_matrix, relabel, rouge_naive, tree_edit_distance_exhaustive, tree_shapes, tree_size  # noqa: E402
from synth import fuzz_corpus, template_clusters  # noqa: E402

FIXTURES = HERE / "fixtures"
RESULTS: dict[str, str] = {}


def verdict(key: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {key}: {detail}"
    RESULTS[key] = line
    print(line)
    assert ok, line


# -------------------------------------------------------------- criterion 1

def test_c1_subtree_soundness():
    t0 = time.perf_counter()
    rng = random.Random(1)
    checked = failures = empty = 0
    for html in fuzz_corpus(2024, 200):
        tree = parse_html(html)
        try:
            _, mapping = preprocess(tree)
        except EmptyDocument:
            empty += 1
            continue
        labels = LabelSequence([rng.choice([Label.MAIN, Label.OTHER]) for _ in range(len(mapping))])
        main = project_labels(mapping, labels, tree)
        page_text = visible_text(tree.root)
        ok = is_subtree(main.tree, tree).ok and validate_main_html(main, tree, mapping).ok
        kept = {i for i, lab in zip(range(1, len(labels) + 1), labels) if lab is Label.MAIN}
        ok = ok and all(block_text(tree, b) in page_text for b in mapping.blocks if b.source_order in kept)
        checked += 1
        failures += not ok
    elapsed = time.perf_counter() - t0
    verdict("C1 subtree soundness",
            failures == 0 and checked + empty == 200 and checked >= 190 and elapsed < 30,
            f"{checked - failures}/{checked} documents valid ({empty} without blocks), {elapsed:.1f}s (limit 30s)")


# -------------------------------------------------------------- criterion 2

def _accepted_streams(n):
    out = []

    def dfs(state, prefix):
        if state.phase is Phase.END:
            out.append(prefix)
            return
        for tok in sorted(fsm_allowed(state).allowed):
            dfs(fsm_step(state, tok), prefix + [tok])
    dfs(fsm_start(n), [])
    return out


def _probe_tokens(n):
    keys = [f'"{i}"' for i in range(0, n + 2)]
    return ["{", "}", ":", ",", '"main"', '"other"', '"Main"', '"maybe"', "main", "[", "]", "null", "1", '""'] + keys


def _rejects_everything_else(n):
    probes = _probe_tokens(n)
    seen = set()
    stack = [fsm_start(n)]
    while stack:
        state = stack.pop()
        if state in seen:
            continue
        seen.add(state)
        allowed = fsm_allowed(state).allowed
        for tok in probes:
            if tok in allowed:
                stack.append(fsm_step(state, tok))
                continue
            try:
                fsm_step(state, tok)
                return False
            except IllegalToken:
                pass
    return True


def test_c2_fsm_bijection():
    t0 = time.perf_counter()
    rng = random.Random(2)
    ok = True
    counts = []
    for n in range(1, 7):
        streams = _accepted_streams(n)
        counts.append(len(streams))
        parsed = set()
        for s in streams:
            obj = json.loads("".join(s))
            ok &= list(obj) == [str(i) for i in range(1, n + 1)] and set(obj.values()) <= {"main", "other"}
            parsed.add(tuple(obj.values()))
        # every admissible JSON object, and only those, is produced
        every = {tuple(("main", "other")[(m >> k) & 1] for k in range(n)) for m in range(2 ** n)}
        ok &= parsed == every and len(streams) == len(every)
        accepted = {tuple(s) for s in streams}
        for values in every:
            canon = canonical_stream(values)
            ok &= tuple(canon) in accepted
            spaced = "".join(tok + rng.choice(["", " ", "\n", "\t  "]) for tok in canon)
            ok &= [lab.value for lab in parse_label_output(spaced, n)] == list(values)
        ok &= _rejects_everything_else(n)
    elapsed = time.perf_counter() - t0
    verdict("C2 FSM grammar", ok and elapsed < 5,
            f"accepted streams per n=1..6: {counts}, bijective with admissible JSON, {elapsed:.2f}s (limit 5s)")


# -------------------------------------------------------------- criterion 3

def test_c3_template_self_consistency():
    t0 = time.perf_counter()
    clusters = template_clusters(33, 50)
    mismatches = 0
    pages = []
    for host, htmls in clusters:
        trees = [parse_html(h) for h in htmls]
        rep = trees[choose_representative(trees)]
        ex = extract_main(rep, HeuristicLabeler())
        rules = synthesize_rules(rep, ex.mapping, ex.labels, cluster_key(f"https://{host}/"))
        if not tree_equal(apply_rules(rep, rules).tree.root, ex.main.tree.root):
            mismatches += 1
        pages += [(f"https://{host}/p{k}", t, f"{host}-{k}") for k, t in enumerate(trees)]
    random.Random(3).shuffle(pages)
    _, stats = cluster_extract(pages, HeuristicLabeler())
    elapsed = time.perf_counter() - t0
    verdict("C3 template self-consistency",
            mismatches == 0 and stats.model_calls == len(clusters) == stats.clusters and elapsed < 60,
            f"{len(clusters) - mismatches}/{len(clusters)} representatives replay exactly, "
            f"model_calls={stats.model_calls} for {stats.clusters} clusters, {elapsed:.1f}s (limit 60s)")


# -------------------------------------------------------------- criterion 4

def _node(t):
    return TreeNode(t[0], [_node(c) for c in t[1]])


def test_c4_metric_oracles():
    t0 = time.perf_counter()
    rng = random.Random(4)
    alphabet = "abcde中é "
    edit_bad = 0
    for _ in range(1000):
        a = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 25)))
        b = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 25)))
        dist = levenshtein_full_matrix(a, b)
        want = 1.0 if not a and not b else 1 - dist / max(len(a), len(b))
        edit_bad += edit_similarity(a, b) != want

    shapes = [s for n in range(1, 7) for s in tree_shapes(n)]
    tree_bad = pairs = 0
    for sa in shapes:
        for sb in shapes:
            ta = relabel(sa, [rng.choice("ab") for _ in range(tree_size(sa))])
            tb = relabel(sb, [rng.choice("ab") for _ in range(tree_size(sb))])
            pairs += 1
            tree_bad += tree_edit_distance(_node(ta), _node(tb)) != tree_edit_distance_exhaustive(ta, tb)

    words = ["x", "y", "z", "w", "中", "文"]
    rouge_worst = 0.0
    for _ in range(500):
        p = " ".join(rng.choice(words) for _ in range(rng.randint(0, 30)))
        g = " ".join(rng.choice(words) for _ in range(rng.randint(0, 30)))
        n = rng.randint(1, 5)
        rouge_worst = max(rouge_worst, abs(rouge_n_f1(p, g, n) - rouge_naive(tokenize(p), tokenize(g), n)))
    elapsed = time.perf_counter() - t0
    verdict("C4 metric oracle equivalence",
            edit_bad == 0 and tree_bad == 0 and pairs == 65 * 65 and rouge_worst <= 1e-12,
            f"editsim 1000/1000 exact={edit_bad == 0}, tree pairs {pairs - tree_bad}/{pairs} exact, "
            f"rouge max |delta|={rouge_worst:.1e} over 500 pairs, {elapsed:.1f}s")


# -------------------------------------------------------------- criterion 5

def test_c5_fixture_fidelity():
    [rec] = load_bench(FIXTURES / "benchmark_example.json")
    ex = extract_with_marker(rec.raw_html, doc_id=rec.track_id)
    main_html = serialize(ex.main.tree)
    md = content_list_to_markdown(to_content_list(ex.main))
    want_html = "<html><body><h1>Hello world!</h1></body></html>"
    verdict("C5 fixture fidelity",
            main_html == want_html and md == "# Hello world!" and main_html == rec.main_html and md == rec.gold_markdown,
            f"main_html={main_html!r}, markdown={md!r}")


# -------------------------------------------------------------- criterion 6

def test_c6_structured_elements():
    records = load_bench(FIXTURES / "structured.jsonl")
    oracle = make_bench_extractor("oracle")
    scores = {m: evaluate(oracle, records, EvalConfig(metric=m)) for m in ("code", "formula", "teds")}
    ok = scores["code"].overall >= 0.99 and scores["formula"].overall >= 0.99 and scores["teds"].overall >= 0.95
    verdict("C6 structured-element preservation", ok and len(records) == 30,
            f"code edit-sim {scores['code'].overall:.4f} (>=0.99, {scores['code'].n_docs} docs), "
            f"formula edit-sim {scores['formula'].overall:.4f} (>=0.99, {scores['formula'].n_docs} docs), "
            f"TEDS {scores['teds'].overall:.4f} (>=0.95, {scores['teds'].n_docs} docs)")


# -------------------------------------------------------------- criterion 7

def test_c7_simplification_ratio():
    ratios = []
    for name in ("minibench.jsonl", "structured.jsonl"):
        for rec in load_bench(FIXTURES / name):
            tree = strip_attribute(parse_html(rec.raw_html), "cc-select")
            raw = serialize(tree)
            simplified, _ = preprocess(tree)
            ratios.append(sum(len(b.text) for b in simplified.blocks) / len(raw))
    mean = math.fsum(ratios) / len(ratios)
    verdict("C7 simplification efficiency", mean <= 0.35,
            f"mean simplified/raw character ratio {mean:.3f} over {len(ratios)} pages (limit 0.35)")


# -------------------------------------------------------------- criterion 8

def _cli(*argv):
    env = dict(os.environ, PYTHONHASHSEED="random")
    out = subprocess.run([sys.executable, "-m", "mainextract.cli", *argv], capture_output=True, env=env)
    assert out.returncode == 0, out.stderr.decode()
    return out.stdout


def test_c8_cli_parity_and_determinism():
    bench = str(FIXTURES / "minibench.jsonl")
    fmt = ["--format", "main_html,markdown,content_list,plain_text"]
    ext1, ext2 = _cli("extract", bench, *fmt), _cli("extract", bench, *fmt)
    lib_ext = "".join(r.dumps() + "\n" for r in run_extract(
        read_documents(bench), PipelineConfig(formats=("main_html", "markdown", "content_list", "plain_text"))))
    ev1, ev2 = _cli("eval", bench, "--json"), _cli("eval", bench, "--json")
    lib_ev = evaluate(make_bench_extractor("pipeline"), load_bench(bench), EvalConfig()).dumps() + "\n"
    ok_ext = ext1 == ext2 == lib_ext.encode()
    ok_ev = ev1 == ev2 == lib_ev.encode()
    verdict("C8 CLI parity and determinism", ok_ext and ok_ev,
            f"extract: runs identical={ext1 == ext2}, equals library={ext1 == lib_ext.encode()} ({len(ext1)} bytes); "
            f"eval: runs identical={ev1 == ev2}, equals library={ev1 == lib_ev.encode()}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
