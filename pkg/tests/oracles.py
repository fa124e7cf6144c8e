"""Independent reference implementations used only by the tests.

These deliberately take a different route from the library: quadratic
rank counting instead of sorting, numpy normal equations instead of
centred sums, Bellman-Ford style relaxation instead of breadth-first search.
"""

from __future__ import annotations

import numpy as np


def average_ranks_bruteforce(values):
    """Descending average ranks by pairwise counting: rank = #greater + (#equal + 1) / 2."""
    v = np.asarray(values, dtype=float)
    greater = (v[None, :] > v[:, None]).sum(axis=1)
    equal = (v[None, :] == v[:, None]).sum(axis=1)
    return greater + (equal + 1) / 2


def spearman_oracle(x, y):
    rx = np.array(average_ranks_bruteforce(list(x)), dtype=float)
    ry = np.array(average_ranks_bruteforce(list(y)), dtype=float)
    rx -= rx.mean()
    ry -= ry.mean()
    return float((rx @ ry) / np.sqrt((rx @ rx) * (ry @ ry)))


def ols_oracle(x, y):
    """(slope, intercept, r2) from the normal equations."""
    A = np.column_stack([np.asarray(x, float), np.ones(len(x))])
    b = np.asarray(y, float)
    intercept_slope = np.linalg.solve(A.T @ A, A.T @ b)
    slope, intercept = intercept_slope
    resid = b - A @ intercept_slope
    ss_tot = float(((b - b.mean()) ** 2).sum())
    r2 = 1.0 - float(resid @ resid) / ss_tot if ss_tot > 0 else 0.0
    return float(slope), float(intercept), r2


def shortest_citation_distances(edges, seed):
    """Distance from ``seed`` along cited -> citing edges by repeated relaxation."""
    inf = float("inf")
    nodes = {seed} | {a for e in edges for a in e}
    dist = {n: inf for n in nodes}
    dist[seed] = 0
    for _ in range(len(nodes)):
        changed = False
        for citing, cited in edges:
            if dist[cited] + 1 < dist[citing]:
                dist[citing] = dist[cited] + 1
                changed = True
        if not changed:
            break
    return {n: d for n, d in dist.items() if n != seed and d != inf}


def shannon_oracle(counts):
    p = np.asarray(counts, float)
    p = p / p.sum()
    return float(-(p * np.log(p)).sum())
