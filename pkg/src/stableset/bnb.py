"""Best-bound-first branch-and-bound driven by the decomposition bound.

With ``workers > 1`` the tree is explored by that many threads sharing one
priority queue and one incumbent; block subproblems are farmed out to a
process pool of the same size, so the total CPU parallelism stays at
``workers``.
"""
from __future__ import annotations

import heapq
import itertools
import logging
import threading
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

from .baseline import SearchLimits, SolveResult
from .decomposition import (DualEvaluation, Multipliers, SubgradientParams, build_blocks,
                            subgradient_optimize)
from .graph import Graph, build_ordering, induced_subgraph

logger = logging.getLogger(__name__)

_EPS = 1e-6


@dataclass
class NodeState:
    residual: Graph
    ids: tuple[int, ...]  # residual vertex -> original id
    fixed_in: tuple[int, ...]
    offset: float
    depth: int = 0
    warm_multipliers: Multipliers | None = None
    parent_bound: float = float("inf")


@dataclass(frozen=True)
class BnbParams:
    limits: SearchLimits = field(default_factory=SearchLimits)
    sub: SubgradientParams = field(default_factory=lambda: SubgradientParams(max_iters=50))
    root_sub: SubgradientParams = field(default_factory=SubgradientParams)
    workers: int = 1
    ordering_strategy: str = "max_degree"

    def __post_init__(self):
        if self.sub.max_iters > self.root_sub.max_iters:
            raise ValueError("per-node max_iters must not exceed the root's")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


def select_branch_vertex(ev: DualEvaluation, node: NodeState) -> int:
    """Residual vertex covered by the most blocks; ties by degree, then smallest id.

    Falls back to maximum residual degree when nothing is over-covered.
    """
    g = node.residual
    if g.n == 0:
        raise ValueError("cannot branch on an empty residual")
    if max(ev.cover_counts) > 1:
        key = lambda v: (ev.cover_counts[v], g.degree(v), -node.ids[v])
    else:
        key = lambda v: (g.degree(v), -node.ids[v])
    return max(range(g.n), key=key)


def apply_branch(node: NodeState, v: int, decision: str, bound: float | None = None,
                 multipliers: Multipliers | None = None) -> NodeState:
    """Child node fixing residual vertex ``v`` in (``"include"``) or out (``"exclude"``)."""
    g = node.residual
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} not in residual")
    if decision == "include":
        drop = g.adj_masks[v] | (1 << v)
        fixed = tuple(sorted(node.fixed_in + (node.ids[v],)))
        offset = node.offset + g.weights[v]
    elif decision == "exclude":
        drop = 1 << v
        fixed, offset = node.fixed_in, node.offset
    else:
        raise ValueError(f"unknown branch decision {decision!r}")
    keep = [x for x in range(g.n) if not drop >> x & 1]
    residual, _ = induced_subgraph(g, keep)
    warm = multipliers if multipliers is not None else node.warm_multipliers
    return NodeState(
        residual=residual,
        ids=tuple(node.ids[x] for x in keep),
        fixed_in=fixed,
        offset=offset,
        depth=node.depth + 1,
        warm_multipliers=warm.restrict(keep) if warm is not None else None,
        parent_bound=node.parent_bound if bound is None else bound,
    )


class _Search:
    def __init__(self, g: Graph, w: Sequence[float], params: BnbParams, on_node):
        self.g = g
        self.w = tuple(w)
        self.params = params
        self.integral = all(float(x).is_integer() for x in self.w)
        self.on_node = on_node
        self.cond = threading.Condition()
        self.inc_lock = threading.Lock()
        self.heap: list = []
        self.seq = itertools.count()
        self.active = 0
        self.nodes = 0
        self.iterations = 0
        self.status = "optimal"
        self.stop = False
        self.error: BaseException | None = None
        self.best_value = 0.0
        self.best_set: tuple[int, ...] = ()
        self.trace: list[tuple[float, float]] = []
        self.t0 = time.perf_counter()
        tl = params.limits.time_limit
        self.deadline = None if tl is None else self.t0 + tl

    def prunable(self, bound: float) -> bool:
        inc = self.best_value
        if self.integral:
            return bound < inc + 1 - _EPS
        return bound <= inc + _EPS * max(1.0, abs(inc))

    def offer(self, value: float, vertices: tuple[int, ...]):
        with self.inc_lock:
            if value > self.best_value:
                self.best_value, self.best_set = value, tuple(sorted(vertices))
                self.trace.append((time.perf_counter() - self.t0, value))

    def push(self, node: NodeState):
        heapq.heappush(self.heap, (-node.parent_bound, next(self.seq), node))

    def process(self, node: NodeState) -> list[NodeState]:
        g = node.residual
        if g.n == 0 or g.m == 0:
            value = node.offset + g.weight_of(range(g.n))
            self.offer(value, node.fixed_in + node.ids)
            if self.on_node:
                self.on_node(node, value, value - node.offset)
            return []
        sub = self.params.root_sub if node.depth == 0 else self.params.sub
        sub = replace(sub, target_lb=max(sub.target_lb, 0.0, self.best_value - node.offset),
                      integral_stop=self.integral)
        bs = build_blocks(g, build_ordering(g, self.params.ordering_strategy))
        dual = subgradient_optimize(bs, None, sub, self.params.workers,
                                    start=node.warm_multipliers, deadline=self.deadline)
        with self.inc_lock:
            self.iterations += dual.iters_run
        bound = node.offset + dual.best_bound
        heur_set, heur_value = dual.best_primal
        if heur_set:
            self.offer(node.offset + heur_value,
                       node.fixed_in + tuple(node.ids[v] for v in heur_set))
        if self.on_node:
            self.on_node(node, bound, heur_value)
        if self.prunable(bound):
            return []
        v = select_branch_vertex(dual.best_evaluation, node)
        return [apply_branch(node, v, d, bound, dual.best_multipliers)
                for d in ("include", "exclude")]

    def limit_hit(self) -> str | None:
        lim = self.params.limits
        if lim.node_limit is not None and self.nodes >= lim.node_limit:
            return "node_limit"
        if lim.time_limit is not None and time.perf_counter() - self.t0 > lim.time_limit:
            return "time_limit"
        return None

    def worker(self):
        while True:
            with self.cond:
                while not self.heap and self.active and not self.stop:
                    self.cond.wait()
                if self.stop or not self.heap:
                    self.cond.notify_all()
                    return
                _, _, node = heapq.heappop(self.heap)
                if self.prunable(node.parent_bound):
                    continue
                hit = self.limit_hit()
                if hit:
                    self.push(node)
                    self.status, self.stop = hit, True
                    self.cond.notify_all()
                    return
                self.active += 1
                self.nodes += 1
            children = []
            try:
                children = self.process(node)
            except BaseException as exc:  # surfaced by run()
                with self.cond:
                    self.error, self.stop = exc, True
            finally:
                with self.cond:
                    self.active -= 1
                    for child in children:
                        self.push(child)
                    self.cond.notify_all()

    def run(self) -> SolveResult:
        self.push(NodeState(self.g, tuple(range(self.g.n)), (), 0.0))
        if self.params.workers == 1:
            self.worker()
        else:
            threads = [threading.Thread(target=self.worker, daemon=True)
                       for _ in range(self.params.workers)]
            for t in threads:
                t.start()
            for t in threads:
                t.join()
        if self.error is not None:
            raise self.error
        open_bounds = [-b for b, _, node in self.heap if not self.prunable(node.parent_bound)]
        dual = max([self.best_value] + open_bounds) if self.status != "optimal" else self.best_value
        return SolveResult(
            status=self.status,
            best_value=self.best_value,
            best_set=self.best_set,
            dual_bound=dual,
            nodes=self.nodes,
            wall_seconds=time.perf_counter() - self.t0,
            iterations=self.iterations,
            incumbent_trace=self.trace,
        )


def solve_decomposition(g: Graph, weights: Sequence[float] | None = None,
                        params: BnbParams | None = None,
                        on_node: Callable[[NodeState, float, float], None] | None = None,
                        ) -> SolveResult:
    """Exact maximum-weight stable set via the Lagrangian decomposition bound.

    ``on_node(node, bound, heuristic_value)`` is called for every evaluated
    node (from worker threads when ``workers > 1``).
    """
    params = params or BnbParams()
    w = g.weights if weights is None else tuple(float(x) for x in weights)
    if len(w) != g.n:
        raise ValueError("weight vector length differs from n")
    if w != g.weights:
        g = g.with_weights(w)
    return _Search(g, w, params, on_node).run()
