"""Dynamic-programming kernels behind the metrics.

Each kernel has a numba implementation and a numpy/pure-Python fallback.
The numba versions are used when numba imports and the environment
variable ``MAINEXTRACT_NO_NUMBA`` is unset (or "0").
"""

from __future__ import annotations

import os

import numpy as np

ENV_DISABLE = "MAINEXTRACT_NO_NUMBA"


def _numba_wanted() -> bool:
    return os.environ.get(ENV_DISABLE, "").strip().lower() in ("", "0", "false", "no")


try:
    if not _numba_wanted():
        raise ImportError("disabled by environment")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


# ------------------------------------------------------------------ Levenshtein

def levenshtein_numpy(a: np.ndarray, b: np.ndarray) -> int:
    """Row-vectorized DP; insertion chains resolved with a running minimum."""
    n, m = len(a), len(b)
    if n == 0 or m == 0:
        return max(n, m)
    cols = np.arange(m + 1, dtype=np.int64)
    prev = cols.copy()
    for i in range(1, n + 1):
        sub = prev[:-1] + (b != a[i - 1])
        t = np.empty(m + 1, dtype=np.int64)
        t[0] = i
        t[1:] = np.minimum(prev[1:] + 1, sub)
        # cur[j] = min_k<=j t[k] + (j - k)
        prev = cols + np.minimum.accumulate(t - cols)
    return int(prev[m])


def _levenshtein_py(a, b):
    n, m = len(a), len(b)
    if n == 0 or m == 0:
        return max(n, m)
    prev = np.arange(m + 1, dtype=np.int64)
    cur = np.empty(m + 1, dtype=np.int64)
    for i in range(1, n + 1):
        cur[0] = i
        ai = a[i - 1]
        for j in range(1, m + 1):
            cost = 0 if ai == b[j - 1] else 1
            best = prev[j - 1] + cost
            if prev[j] + 1 < best:
                best = prev[j] + 1
            if cur[j - 1] + 1 < best:
                best = cur[j - 1] + 1
            cur[j] = best
        prev, cur = cur, prev
    return prev[m]


# ------------------------------------------------------------------ Zhang-Shasha

def _zhang_shasha_py(lab1, lml1, kr1, lab2, lml2, kr2):
    """Unit-cost ordered tree edit distance over postorder arrays.

    ``lab`` are integer labels, ``lml`` leftmost-leaf indices and ``kr``
    the keyroots in increasing order.
    """
    n1, n2 = len(lab1), len(lab2)
    td = np.zeros((n1, n2), dtype=np.int64)
    fd = np.zeros((n1 + 1, n2 + 1), dtype=np.int64)
    for ii in range(len(kr1)):
        i = kr1[ii]
        li = lml1[i]
        for jj in range(len(kr2)):
            j = kr2[jj]
            lj = lml2[j]
            rows = i - li + 2
            cols = j - lj + 2
            fd[0, 0] = 0
            for dx in range(1, rows):
                fd[dx, 0] = fd[dx - 1, 0] + 1
            for dy in range(1, cols):
                fd[0, dy] = fd[0, dy - 1] + 1
            for x in range(li, i + 1):
                dx = x - li + 1
                for y in range(lj, j + 1):
                    dy = y - lj + 1
                    dele = fd[dx - 1, dy] + 1
                    ins = fd[dx, dy - 1] + 1
                    if lml1[x] == li and lml2[y] == lj:
                        rel = fd[dx - 1, dy - 1] + (0 if lab1[x] == lab2[y] else 1)
                        best = min(dele, ins, rel)
                        fd[dx, dy] = best
                        td[x, y] = best
                    else:
                        rel = fd[lml1[x] - li, lml2[y] - lj] + td[x, y]
                        fd[dx, dy] = min(dele, ins, rel)
    return td[n1 - 1, n2 - 1]


if HAVE_NUMBA:
    levenshtein_fast = njit(cache=True, nogil=True)(_levenshtein_py)
    zhang_shasha_fast = njit(cache=True, nogil=True)(_zhang_shasha_py)
else:
    levenshtein_fast = None
    zhang_shasha_fast = None


def levenshtein(a: np.ndarray, b: np.ndarray, use_numba: bool | None = None) -> int:
    if use_numba is None:
        use_numba = HAVE_NUMBA
    if use_numba and levenshtein_fast is not None:
        return int(levenshtein_fast(a, b))
    return levenshtein_numpy(a, b)


def zhang_shasha(lab1, lml1, kr1, lab2, lml2, kr2, use_numba: bool | None = None) -> int:
    if use_numba is None:
        use_numba = HAVE_NUMBA
    args = tuple(np.ascontiguousarray(x, dtype=np.int64) for x in (lab1, lml1, kr1, lab2, lml2, kr2))
    if use_numba and zhang_shasha_fast is not None:
        return int(zhang_shasha_fast(*args))
    return int(_zhang_shasha_py(*args))


def codepoints(s: str) -> np.ndarray:
    return np.frombuffer(s.encode("utf-32-le"), dtype=np.uint32).astype(np.int64)
