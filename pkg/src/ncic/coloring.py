"""Exact graph coloring by DSATUR branch and bound."""

from __future__ import annotations

import sys
from typing import Sequence


def greedy_clique(adj: Sequence[set[int]]) -> list[int]:
    """A maximal clique grown greedily from each vertex; the largest one found."""
    best: list[int] = []
    order = sorted(range(len(adj)), key=lambda v: -len(adj[v]))
    for start in order[: min(len(order), 64)]:
        clique = [start]
        cand = set(adj[start])
        while cand:
            v = max(cand, key=lambda u: (len(adj[u] & cand), -u))
            clique.append(v)
            cand &= adj[v]
        if len(clique) > len(best):
            best = clique
    return best


def k_coloring(adj: Sequence[set[int]], k: int, seed: Sequence[int] = ()) -> list[int] | None:
    """
    A proper coloring with at most k colors, or None. ``seed`` is a clique that
    is pre-colored 0, 1, ... to break color symmetry.
    """
    n = len(adj)
    if n == 0:
        return []
    if k <= 0:
        return None
    color = [-1] * n
    # sat_count[v][c] = number of neighbours of v coloured c
    sat_count = [[0] * k for _ in range(n)]
    sat = [0] * n
    deg = [len(a) for a in adj]

    def assign(v, c):
        color[v] = c
        for w in adj[v]:
            row = sat_count[w]
            if row[c] == 0:
                sat[w] += 1
            row[c] += 1

    def unassign(v, c):
        color[v] = -1
        for w in adj[v]:
            row = sat_count[w]
            row[c] -= 1
            if row[c] == 0:
                sat[w] -= 1

    used = 0
    for i, v in enumerate(seed):
        if i >= k:
            return None
        assign(v, i)
        used = i + 1

    def solve(done, used):
        if done == n:
            return True
        v = -1
        best = (-1, -1)
        for u in range(n):
            if color[u] < 0:
                key = (sat[u], deg[u])
                if key > best:
                    best, v = key, u
        if sat[v] >= k:
            return False
        row = sat_count[v]
        for c in range(min(used + 1, k)):
            if row[c] == 0:
                assign(v, c)
                if solve(done + 1, max(used, c + 1)):
                    return True
                unassign(v, c)
        return False

    limit = sys.getrecursionlimit()
    if limit < n + 100:
        sys.setrecursionlimit(n + 100)
    if solve(len(seed), used):
        return color
    return None


def chromatic_number(adj: Sequence[set[int]]) -> tuple[int, list[int]]:
    """Exact chromatic number and an optimal coloring."""
    n = len(adj)
    if n == 0:
        return 0, []
    clique = greedy_clique(adj)
    k = len(clique)
    while True:
        col = k_coloring(adj, k, clique)
        if col is not None:
            return k, col
        k += 1
