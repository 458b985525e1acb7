"""Time the numba kernels against their numpy/pure-Python fallbacks.

    python benchmarks/bench_kernels.py --sizes 200 1000 4000 --repeat 3
"""

from __future__ import annotations

import argparse
import random
import statistics
import time

import numpy as np

from mainextract.evalkit import _kernels
from mainextract.evalkit.metrics import TreeNode, _postorder


def random_codes(rng: np.random.Generator, n: int, alphabet: int = 30) -> np.ndarray:
    return rng.integers(0, alphabet, size=n).astype(np.int64)


def random_table(rng: random.Random, rows: int, cols: int) -> TreeNode:
    return TreeNode(("table", ""), [
        TreeNode(("tr", ""), [TreeNode(("td", str(rng.randint(0, 9)))) for _ in range(cols)]) for _ in range(rows)
    ])


def timeit(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description="numba vs fallback kernel timings")
    ap.add_argument("--sizes", type=int, nargs="+", default=[200, 1000, 4000], help="string lengths")
    ap.add_argument("--tables", type=int, nargs="+", default=[5, 10, 20], help="square table sizes")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if not _kernels.HAVE_NUMBA:
        print("numba unavailable or disabled; only fallback timings are shown")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<14}{'size':>8}{'numba s':>12}{'fallback s':>12}{'speedup':>10}")
    for n in args.sizes:
        a, b = random_codes(rng, n), random_codes(rng, n)
        if _kernels.HAVE_NUMBA:
            _kernels.levenshtein(a[:5], b[:5], use_numba=True)  # compile outside the timing
        fast = timeit(lambda: _kernels.levenshtein(a, b, use_numba=True), args.repeat) if _kernels.HAVE_NUMBA else float("nan")
        slow = timeit(lambda: _kernels.levenshtein(a, b, use_numba=False), args.repeat)
        print(f"{'levenshtein':<14}{n:>8}{fast:>12.5f}{slow:>12.5f}{slow / fast:>10.1f}")

    prng = random.Random(args.seed)
    for k in args.tables:
        codes: dict = {}
        pa = _postorder(random_table(prng, k, k), codes)
        pb = _postorder(random_table(prng, k, k), codes)
        if _kernels.HAVE_NUMBA:
            _kernels.zhang_shasha(*pa, *pb, use_numba=True)
        fast = timeit(lambda: _kernels.zhang_shasha(*pa, *pb, use_numba=True), args.repeat) if _kernels.HAVE_NUMBA else float("nan")
        slow = timeit(lambda: _kernels.zhang_shasha(*pa, *pb, use_numba=False), args.repeat)
        nodes = len(pa[0])
        print(f"{'zhang-shasha':<14}{nodes:>8}{fast:>12.5f}{slow:>12.5f}{slow / fast:>10.1f}")


if __name__ == "__main__":
    main()
