"""Independent reference implementations the fast code is checked against."""

from __future__ import annotations

from functools import lru_cache


def levenshtein_full_matrix(a: str, b: str) -> int:
    """Textbook (n+1)x(m+1) DP table."""
    d = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a) + 1):
        d[i][0] = i
    for j in range(len(b) + 1):
        d[0][j] = j
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            d[i][j] = min(d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] != b[j - 1]))
    return d[len(a)][len(b)]


def rouge_naive(pred_tokens: list[str], gold_tokens: list[str], n: int) -> float:
    if not pred_tokens and not gold_tokens:
        return 1.0
    if not pred_tokens or not gold_tokens:
        return 0.0
    n = min(n, len(pred_tokens), len(gold_tokens))
    pg = [tuple(pred_tokens[i:i + n]) for i in range(len(pred_tokens) - n + 1)]
    gg = [tuple(gold_tokens[i:i + n]) for i in range(len(gold_tokens) - n + 1)]
    remaining = list(gg)
    match = 0
    for g in pg:
        if g in remaining:
            remaining.remove(g)
            match += 1
    if match == 0:
        return 0.0
    p, r = match / len(pg), match / len(gg)
    return 2 * p * r / (p + r)


# ------------------------------------------------------------------ trees
# A tree is (label, (child, child, ...)).

def tree_size(t) -> int:
    return 1 + sum(tree_size(c) for c in t[1])


def _flatten(t):
    """Preorder nodes with (label, parent index, postorder rank)."""
    nodes = []

    def visit(node, parent):
        idx = len(nodes)
        nodes.append([node[0], parent, None])
        for c in node[1]:
            visit(c, idx)
    visit(t, -1)
    order = []

    def post(i):
        for j, n in enumerate(nodes):
            if n[1] == i:
                post(j)
        order.append(i)
    post(0)
    for rank, i in enumerate(order):
        nodes[i][2] = rank
    return nodes


def _ancestors(nodes):
    anc = []
    for i in range(len(nodes)):
        s = set()
        p = nodes[i][1]
        while p != -1:
            s.add(p)
            p = nodes[p][1]
        anc.append(s)
    return anc


def tree_edit_distance_exhaustive(a, b) -> int:
    """Minimum over every valid (Tai) mapping of the mapping's cost.

    A mapping is a partial one-to-one node correspondence that preserves
    ancestry and left-to-right order; its cost is relabels + deletions +
    insertions.  This equals the unit-cost edit distance.
    """
    na, nb = _flatten(a), _flatten(b)
    anc_a, anc_b = _ancestors(na), _ancestors(nb)
    best = len(na) + len(nb)

    def compatible(pairs, i, j):
        for (k, l) in pairs:
            if (k in anc_a[i]) != (l in anc_b[j]) or (i in anc_a[k]) != (j in anc_b[l]):
                return False
            # sibling order: preorder index comparison among non-ancestors
            if k not in anc_a[i] and i not in anc_a[k]:
                if (k < i) != (l < j):
                    return False
        return True

    def search(i, pairs, used_b):
        nonlocal best
        if i == len(na):
            cost = sum(na[k][0] != nb[l][0] for k, l in pairs)
            cost += (len(na) - len(pairs)) + (len(nb) - len(pairs))
            best = min(best, cost)
            return
        search(i + 1, pairs, used_b)
        for j in range(len(nb)):
            if j not in used_b and compatible(pairs, i, j):
                pairs.append((i, j))
                used_b.add(j)
                search(i + 1, pairs, used_b)
                pairs.pop()
                used_b.discard(j)

    search(0, [], set())
    return best


@lru_cache(maxsize=None)
def tree_shapes(n: int) -> tuple:
    """All ordered unlabeled trees with exactly n nodes."""
    if n == 1:
        return ((None, ()),)
    out = []
    for forest in forests(n - 1):
        out.append((None, forest))
    return tuple(out)


@lru_cache(maxsize=None)
def forests(n: int) -> tuple:
    if n == 0:
        return ((),)
    out = []
    for first in range(1, n + 1):
        for t in tree_shapes(first):
            for rest in forests(n - first):
                out.append((t,) + rest)
    return tuple(out)


def relabel(shape, labels):
    it = iter(labels)

    def go(t):
        lab = next(it)
        return (lab, tuple(go(c) for c in t[1]))
    return go(shape)
