"""Combinatorial branch-and-bound for MWSS with greedy clique-cover bounds.

This is the comparator solver and also the exact engine behind every block
subproblem of the decomposition, so the inner loop works on bitsets.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Sequence

from .graph import Graph, VertexOrdering, iter_bits


@dataclass(frozen=True)
class SearchLimits:
    time_limit: float | None = None
    node_limit: int | None = None

    def __post_init__(self):
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if self.node_limit is not None and self.node_limit <= 0:
            raise ValueError("node_limit must be positive")


@dataclass
class SolveResult:
    status: str  # "optimal" | "time_limit" | "node_limit"
    best_value: float
    best_set: tuple[int, ...]  # 0-based, ascending
    dual_bound: float
    nodes: int
    wall_seconds: float
    iterations: int = 0
    incumbent_trace: list[tuple[float, float]] = field(default_factory=list, repr=False)


def clique_cover_bound(g: Graph, weights: Sequence[float] | None = None,
                       ordering: VertexOrdering | None = None) -> float:
    """Greedy clique partition bound.

    Vertices are scanned in ``ordering``; each joins the first open clique
    whose members are all adjacent to it, else starts a new clique. Returns
    the sum over cliques of the heaviest member's weight.
    """
    w = g.weights if weights is None else weights
    order = range(g.n) if ordering is None else ordering.order
    commons: list[int] = []
    heaviest: list[float] = []
    for v in order:
        for i, common in enumerate(commons):
            if common >> v & 1:
                commons[i] = common & g.adj_masks[v]
                if w[v] > heaviest[i]:
                    heaviest[i] = w[v]
                break
        else:
            commons.append(g.adj_masks[v])
            heaviest.append(w[v])
    return sum(heaviest)


def _cover_bound(adj, w, cand: int, order) -> float:
    # order is by non-increasing weight, so a clique's first member is its heaviest
    commons = []
    total = 0.0
    for v in order:
        if not cand >> v & 1:
            continue
        for i, common in enumerate(commons):
            if common >> v & 1:
                commons[i] = common & adj[v]
                break
        else:
            commons.append(adj[v])
            total += w[v]
    return total


def _greedy(adj, w, cand: int, order) -> tuple[float, int]:
    value, chosen = 0.0, 0
    for v in order:
        if cand >> v & 1:
            chosen |= 1 << v
            value += w[v]
            cand &= ~adj[v]
    return value, chosen


class _LimitReached(Exception):
    pass


def mwss_bitset(adj: Sequence[int], w: Sequence[float], cand: int, *,
                lower: float = 0.0, integral: bool = False,
                limits: SearchLimits | None = None, stats: dict | None = None):
    """Maximum-weight stable set of the subgraph induced by bitset ``cand``.

    Only sets whose weight strictly exceeds ``lower`` are of interest: the
    search starts with ``lower`` as a virtual incumbent. Returns
    ``(value, mask)``; ``mask`` is ``None`` when nothing beats ``lower``.
    All weights of ``cand`` must be positive.

    When ``stats`` is given it receives ``nodes``, ``status``, ``dual_bound``
    and ``trace`` (incumbent improvements as (seconds, value)).
    """
    order = sorted(iter_bits(cand), key=lambda v: (-w[v], v))
    best_value, best_mask = lower, None
    trace = []
    t0 = time.perf_counter()

    g_value, g_mask = _greedy(adj, w, cand, order)
    if g_value > best_value:
        best_value, best_mask = g_value, g_mask
        trace.append((0.0, g_value))

    time_limit = limits.time_limit if limits else None
    node_limit = limits.node_limit if limits else None
    nodes = 0
    stack = [(cand, 0.0, 0)]
    status = "optimal"
    while stack:
        if node_limit is not None and nodes >= node_limit:
            status = "node_limit"
            break
        if time_limit is not None and nodes & 63 == 0 and time.perf_counter() - t0 > time_limit:
            status = "time_limit"
            break
        P, value, chosen = stack.pop()
        nodes += 1
        if not P:
            if value > best_value:
                best_value, best_mask = value, chosen
                trace.append((time.perf_counter() - t0, value))
            continue
        bound = value + _cover_bound(adj, w, P, order)
        if integral:
            if bound < best_value + 1:
                continue
        elif bound <= best_value:
            continue
        branch, branch_deg = -1, -1
        for v in iter_bits(P):
            d = (adj[v] & P).bit_count()
            if d > branch_deg:
                branch, branch_deg = v, d
        if branch_deg == 0:
            # edgeless residual: the cover bound is exact and attained
            if bound > best_value:
                best_value, best_mask = bound, chosen | P
                trace.append((time.perf_counter() - t0, bound))
            continue
        bit = 1 << branch
        stack.append((P & ~bit, value, chosen))
        stack.append((P & ~bit & ~adj[branch], value + w[branch], chosen | bit))

    if stats is not None:
        if status == "optimal":
            dual = best_value
        else:
            dual = max([best_value] + [v + _cover_bound(adj, w, P, order) for P, v, _ in stack])
        stats.update(nodes=nodes, status=status, dual_bound=dual, trace=trace)
    return best_value, best_mask


def solve_baseline(g: Graph, weights: Sequence[float] | None = None,
                   limits: SearchLimits | None = None) -> SolveResult:
    """Exact include-first depth-first branch-and-bound on the maximum-degree vertex."""
    w = g.weights if weights is None else tuple(float(x) for x in weights)
    if len(w) != g.n:
        raise ValueError("weight vector length differs from n")
    integral = all(x.is_integer() for x in w)
    stats: dict = {}
    t0 = time.perf_counter()
    value, mask = mwss_bitset(g.adj_masks, w, g.all_mask, lower=0.0, integral=integral,
                              limits=limits, stats=stats)
    elapsed = time.perf_counter() - t0
    best = tuple(iter_bits(mask)) if mask else ()
    return SolveResult(
        status=stats["status"],
        best_value=value if mask else 0.0,
        best_set=best,
        dual_bound=stats["dual_bound"],
        nodes=stats["nodes"],
        wall_seconds=elapsed,
        iterations=0,
        incumbent_trace=stats["trace"],
    )
