"""Lagrangian decomposition of the representatives formulation.

Integer program (one block per vertex ``u`` of the ordering)::

    max  sum_u w_u x_uu + sum_u sum_{v in B_u} w_v x_uv
    s.t. sum_u x_uu <= 1                               (cardinality)
         x_uv <= x_uu,  x_uv + x_uw <= x_uu  (vw in E)  (in-block stability)
         sum_{blocks containing v} x_.v <= 1           (coverage, one per v)

where ``B_u`` holds the non-neighbours of ``u`` that follow it in the
ordering; ``u`` represents the stable set whose ordering-minimal vertex it
is. Dualising cardinality (``mu``) and coverage (``lam``) leaves one
independent MWSS per block::

    L(lam, mu) = mu + sum_v lam_v
                 + sum_u max(0, w_u - lam_u - mu + MWSS(B_u, w - lam))

``L`` is convex and piecewise linear in the multipliers and bounds the
stable set optimum from above for every ``lam, mu >= 0``.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from ._parallel import get_pool
from .baseline import mwss_bitset
from .graph import Graph, VertexOrdering, build_ordering, induced_subgraph, iter_bits, later_mask


@dataclass(frozen=True)
class Block:
    root: int
    members: tuple[int, ...]  # ascending ids
    member_mask: int
    graph: Graph = field(repr=False, compare=False)

    @cached_property
    def member_graph(self) -> tuple[Graph, dict[int, int]]:
        return induced_subgraph(self.graph, self.members)


@dataclass(frozen=True)
class BlockSystem:
    graph: Graph
    ordering: VertexOrdering
    blocks: tuple[Block, ...]  # indexed by root
    coverage_index: tuple[tuple[int, ...], ...]  # v -> roots of blocks containing v

    @property
    def n(self) -> int:
        return self.graph.n


def build_blocks(g: Graph, ordering: VertexOrdering | None = None) -> BlockSystem:
    if ordering is None:
        ordering = build_ordering(g, "max_degree")
    blocks = []
    coverage: list[list[int]] = [[u] for u in range(g.n)]
    for u in range(g.n):
        mask = later_mask(ordering, u) & ~g.adj_masks[u]
        members = tuple(iter_bits(mask))
        for v in members:
            coverage[v].append(u)
        blocks.append(Block(u, members, mask, g))
    return BlockSystem(g, ordering, tuple(blocks), tuple(tuple(sorted(c)) for c in coverage))


@dataclass(frozen=True)
class Multipliers:
    lam: np.ndarray
    mu: float = 0.0

    @classmethod
    def zeros(cls, n: int) -> "Multipliers":
        return cls(np.zeros(n), 0.0)

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float)
        if lam.ndim != 1:
            raise ValueError("lam must be a vector")
        if (lam < 0).any() or self.mu < 0:
            raise ValueError("multipliers must be non-negative")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mu", float(self.mu))

    def restrict(self, keep: Sequence[int]) -> "Multipliers":
        """Multipliers of the surviving vertices ``keep`` (in new-id order); mu kept."""
        return Multipliers(self.lam[list(keep)], self.mu)


@dataclass(frozen=True)
class DualEvaluation:
    value: float
    g_mu: float
    g_lambda: np.ndarray
    block_values: tuple[float, ...]
    selections: tuple[tuple[bool, tuple[int, ...]], ...]  # per root: (x_uu, S_u)
    cover_counts: tuple[int, ...]


def _solve_block_chunk(adj, adjusted, gains, jobs):
    """Worker-side kernel: block values and selected member masks."""
    out = []
    for root, members in jobs:
        gain = gains[root]
        cand = 0
        ub = gain
        for v in iter_bits(members):
            if adjusted[v] > 0:
                cand |= 1 << v
                ub += adjusted[v]
        if ub <= 0:
            out.append((0.0, None))
            continue
        inner, mask = mwss_bitset(adj, adjusted, cand, lower=-gain)
        if mask is None:
            out.append((0.0, None))
        else:
            out.append((gain + inner, mask))
    return out


def _chunks(bs: BlockSystem, workers: int):
    # longest block first onto the lightest chunk; assignment never affects results
    order = sorted(range(bs.n), key=lambda u: (-len(bs.blocks[u].members), u))
    chunks = [[] for _ in range(workers)]
    loads = [0] * workers
    for u in order:
        i = loads.index(min(loads))
        chunks[i].append(u)
        loads[i] += 1 + len(bs.blocks[u].members) ** 2
    return [c for c in chunks if c]


def evaluate_dual(bs: BlockSystem, weights: Sequence[float] | None, m: Multipliers,
                  workers: int = 1) -> DualEvaluation:
    """Lagrangian function value, subgradient and block argmaxes at ``m``.

    Zero-value blocks select nothing. The result does not depend on
    ``workers``: each block is solved by the same deterministic kernel and
    the reduction runs in root order after all blocks finish.
    """
    n = bs.n
    w = bs.graph.weights if weights is None else weights
    if len(w) != n or m.lam.shape != (n,):
        raise ValueError(f"dimension mismatch: n={n}, weights={len(w)}, lam={m.lam.shape}")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    lam = m.lam.tolist()
    adjusted = [w[v] - lam[v] for v in range(n)]
    gains = [adjusted[u] - m.mu for u in range(n)]
    adj = bs.graph.adj_masks

    results: list = [None] * n
    if workers == 1 or n < 2:
        jobs = [(u, bs.blocks[u].member_mask) for u in range(n)]
        results = _solve_block_chunk(adj, adjusted, gains, jobs)
    else:
        pool = get_pool(workers)
        chunks = _chunks(bs, workers)
        futures = [pool.submit(_solve_block_chunk, adj, adjusted, gains,
                               [(u, bs.blocks[u].member_mask) for u in chunk])
                   for chunk in chunks]
        for chunk, fut in zip(chunks, futures):
            for u, res in zip(chunk, fut.result()):
                results[u] = res

    cover = [0] * n
    block_values = []
    selections = []
    roots_chosen = 0
    for u, (val, mask) in enumerate(results):
        block_values.append(val)
        if mask is None:
            selections.append((False, ()))
            continue
        roots_chosen += 1
        cover[u] += 1
        chosen = tuple(iter_bits(mask))
        for v in chosen:
            cover[v] += 1
        selections.append((True, chosen))

    value = m.mu + math.fsum(lam) + math.fsum(block_values)
    return DualEvaluation(
        value=value,
        g_mu=1.0 - roots_chosen,
        g_lambda=1.0 - np.asarray(cover, dtype=float),
        block_values=tuple(block_values),
        selections=tuple(selections),
        cover_counts=tuple(cover),
    )


def lagrangian_heuristic(bs: BlockSystem, weights: Sequence[float] | None,
                         ev: DualEvaluation, g: Graph | None = None) -> tuple[tuple[int, ...], float]:
    """Primal stable set from the best block's selection, extended greedily."""
    g = bs.graph if g is None else g
    w = g.weights if weights is None else weights
    if g.n == 0:
        return (), 0.0
    best = max(range(bs.n), key=lambda u: (ev.block_values[u], -u))
    if ev.block_values[best] > 0:
        chosen = [best, *ev.selections[best][1]]
    else:
        chosen = [max(range(g.n), key=lambda v: (w[v], -v))]
    blocked = 0
    for v in chosen:
        blocked |= g.adj_masks[v] | (1 << v)
    for v in sorted(range(g.n), key=lambda x: (-w[x], x)):
        if not blocked >> v & 1:
            chosen.append(v)
            blocked |= g.adj_masks[v] | (1 << v)
    chosen.sort()
    return tuple(chosen), math.fsum(w[v] for v in chosen)


@dataclass(frozen=True)
class SubgradientParams:
    max_iters: int = 500
    theta0: float = 2.0
    halve_after: int = 20
    theta_min: float = 1e-4
    target_lb: float = 0.0
    tolerance: float = 1e-6
    # stop once bound - target < 1; only sound for integral weights
    integral_stop: bool = False

    def __post_init__(self):
        if not 0 < self.theta0 <= 2:
            raise ValueError("theta0 must lie in (0, 2]")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.halve_after < 1:
            raise ValueError("halve_after must be >= 1")


@dataclass
class DualResult:
    best_bound: float
    best_multipliers: Multipliers
    best_evaluation: DualEvaluation
    best_primal: tuple[tuple[int, ...], float]
    iters_run: int
    stop_reason: str
    trace: list[tuple[float, float]] = field(default_factory=list, repr=False)


def subgradient_optimize(bs: BlockSystem, weights: Sequence[float] | None = None,
                         params: SubgradientParams | None = None, workers: int = 1,
                         start: Multipliers | None = None,
                         deadline: float | None = None) -> DualResult:
    """Projected subgradient descent on L with a Polyak step.

    Step ``t = theta * (L - target) / ||d||^2`` where ``d`` is the subgradient
    with components zeroed when the multiplier sits at 0 and the projection
    would cancel the move. ``theta`` halves after ``halve_after`` iterations
    without an improvement larger than ``tolerance``. ``deadline`` is a
    ``time.perf_counter()`` instant after which no new iteration starts.
    """
    params = params or SubgradientParams()
    n = bs.n
    w = bs.graph.weights if weights is None else weights
    m = start if start is not None else Multipliers.zeros(n)
    lam, mu = m.lam.copy(), m.mu
    theta = params.theta0
    target = params.target_lb
    best_bound = math.inf
    best_m = best_ev = None
    best_primal: tuple[tuple[int, ...], float] = ((), 0.0)
    stall = 0
    trace = []
    reason = "max_iters"
    it = 0
    while it < params.max_iters:
        if deadline is not None and it and time.perf_counter() > deadline:
            reason = "time_limit"
            break
        it += 1
        cur = Multipliers(lam, mu)
        ev = evaluate_dual(bs, w, cur, workers)
        if ev.value < best_bound - params.tolerance:
            stall = 0
        else:
            stall += 1
        if ev.value < best_bound:
            best_bound, best_m, best_ev = ev.value, cur, ev

        primal = lagrangian_heuristic(bs, w, ev)
        if primal[1] > best_primal[1]:
            best_primal = primal
        target = max(target, best_primal[1])

        if best_bound - target <= params.tolerance:
            trace.append((ev.value, 0.0))
            reason = "gap_closed"
            break
        if params.integral_stop and best_bound - target < 1 - params.tolerance:
            trace.append((ev.value, 0.0))
            reason = "gap_closed"
            break

        d_lam = ev.g_lambda.copy()
        d_lam[(lam <= 0) & (d_lam > 0)] = 0.0
        d_mu = 0.0 if (mu <= 0 and ev.g_mu > 0) else ev.g_mu
        norm2 = float(d_lam @ d_lam) + d_mu * d_mu
        if norm2 == 0.0:
            trace.append((ev.value, 0.0))
            reason = "zero_subgradient"
            break
        if stall >= params.halve_after:
            theta *= 0.5
            stall = 0
            if theta < params.theta_min:
                trace.append((ev.value, 0.0))
                reason = "theta_min"
                break
        step = theta * (ev.value - target) / norm2
        trace.append((ev.value, step))
        lam = np.maximum(0.0, lam - step * d_lam)
        mu = max(0.0, mu - step * d_mu)

    return DualResult(best_bound, best_m, best_ev, best_primal, it, reason, trace)


__all__ = [
    "Block", "BlockSystem", "build_blocks", "Multipliers", "DualEvaluation",
    "evaluate_dual", "lagrangian_heuristic", "SubgradientParams", "DualResult",
    "subgradient_optimize",
]
