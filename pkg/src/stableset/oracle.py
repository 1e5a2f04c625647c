"""Brute-force maximum-weight stable set, the ground truth for the test-suite.

Deliberately naive: a plain include-first enumeration over vertices in index
order with only the "remaining weight" bound. It shares no code with the
solvers beyond the Graph type.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .graph import Graph

MAX_ORACLE_N = 26


@dataclass(frozen=True)
class OracleResult:
    value: float
    set: tuple[int, ...]  # 0-based, ascending


def brute_force_mwss(g: Graph, weights: Sequence[float] | None = None) -> OracleResult:
    """Exact optimum; among optimal sets the lexicographically smallest one.

    Include-first enumeration in index order visits stable sets in
    lexicographic order, so keeping the first optimum found (replacing only on
    a strict improvement) yields the lexicographically smallest optimum.
    """
    n = g.n
    if n > MAX_ORACLE_N:
        raise ValueError(f"oracle refuses n={n} > {MAX_ORACLE_N}")
    w = list(g.weights if weights is None else weights)
    if len(w) != n:
        raise ValueError("weight vector length differs from n")
    nbrs = [set(g.adjacency[v]) for v in range(n)]
    suffix = [0.0] * (n + 1)
    for v in range(n - 1, -1, -1):
        suffix[v] = suffix[v + 1] + w[v]

    best_value = 0.0
    best_set: list[int] = []
    chosen: list[int] = []

    def rec(v: int, value: float, blocked: set):
        nonlocal best_value, best_set
        if v == n:
            if value > best_value:
                best_value, best_set = value, list(chosen)
            return
        if value + suffix[v] <= best_value:
            return
        if v not in blocked:
            chosen.append(v)
            rec(v + 1, value + w[v], blocked | nbrs[v])
            chosen.pop()
        rec(v + 1, value, blocked)

    rec(0, 0.0, set())
    return OracleResult(best_value, tuple(best_set))
