"""Metrics, benchmark loading, report assembly and pairwise judging."""

from .bench import TRACKS, BenchRecord, BenchRecords, SchemaError, load_bench, record_tracks, strip_marker
from .compare import ComparePair, CompareSummary, bin_index, compare_pairs, load_weights
from .judge import JudgeConfig, JudgeUnavailable, MalformedVerdict, Verdict, judge_batch, judge_pair, parse_verdict, rating_prompt
from .metrics import ParseFailure, TreeNode, edit_distance, edit_similarity, length_ratio, rouge_n_f1, table_tree, teds, tokenize, tree_edit_distance
from .report import EvalConfig, MetricReport, evaluate, score_document
from .structured import element_scores, extract_elements

__all__ = [
    "TRACKS", "BenchRecord", "BenchRecords", "SchemaError", "load_bench", "record_tracks", "strip_marker",
    "ComparePair", "CompareSummary", "bin_index", "compare_pairs", "load_weights",
    "JudgeConfig", "JudgeUnavailable", "MalformedVerdict", "Verdict", "judge_batch", "judge_pair", "parse_verdict", "rating_prompt",
    "ParseFailure", "TreeNode", "edit_distance", "edit_similarity", "length_ratio", "rouge_n_f1", "table_tree", "teds", "tokenize", "tree_edit_distance",
    "EvalConfig", "MetricReport", "evaluate", "score_document",
    "element_scores", "extract_elements",
]
