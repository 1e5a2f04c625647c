"""Weighted undirected graphs, DIMACS I/O, random instances and vertex orderings.

Vertices are ``0..n-1`` internally and ``1..n`` in every file and report.
Adjacency is kept as Python-int bitsets (bit ``v`` of ``adj_masks[u]`` set
iff ``uv`` is an edge); the solvers work on these masks directly.
"""
from __future__ import annotations

import io
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence, TextIO

logger = logging.getLogger(__name__)

__all__ = [
    "DimacsError",
    "Graph",
    "VertexOrdering",
    "SplitMix64",
    "parse_dimacs",
    "write_dimacs",
    "erdos_renyi",
    "induced_subgraph",
    "build_ordering",
    "anti_neighbors_after",
    "iter_bits",
    "ORDERING_STRATEGIES",
]


class DimacsError(ValueError):
    """Malformed DIMACS input."""


def iter_bits(mask: int):
    """Yield the indices of set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple graph with positive vertex weights.

    Build through :meth:`from_edges`; the raw constructor trusts its input.
    """

    n: int
    adj_masks: tuple[int, ...]
    weights: tuple[float, ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]],
                   weights: Sequence[float] | None = None) -> "Graph":
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        masks = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        if weights is None:
            w = (1.0,) * n
        else:
            w = tuple(float(x) for x in weights)
            if len(w) != n:
                raise ValueError(f"expected {n} weights, got {len(w)}")
            for i, x in enumerate(w):
                if not math.isfinite(x) or x <= 0:
                    raise ValueError(f"weight of vertex {i + 1} must be finite and > 0, got {x}")
        return cls(n, tuple(masks), w)

    def with_weights(self, weights: Sequence[float]) -> "Graph":
        return Graph.from_edges(self.n, self.edges, weights)

    @cached_property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset((u, v) for u in range(self.n)
                         for v in iter_bits(self.adj_masks[u] >> (u + 1) << (u + 1)))

    @property
    def m(self) -> int:
        return sum(mask.bit_count() for mask in self.adj_masks) // 2

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(iter_bits(mask)) for mask in self.adj_masks)

    def degree(self, v: int) -> int:
        return self.adj_masks[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj_masks[u] >> v & 1)

    @property
    def all_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def integral(self) -> bool:
        """True when every weight is an integer (enables the +1 pruning rule)."""
        return all(float(x).is_integer() for x in self.weights)

    @property
    def density(self) -> float:
        if self.n < 2:
            return 0.0
        return 2.0 * self.m / (self.n * (self.n - 1))

    def is_stable(self, vertices: Iterable[int]) -> bool:
        mask = 0
        for v in vertices:
            if self.adj_masks[v] & mask:
                return False
            mask |= 1 << v
        return True

    def weight_of(self, vertices: Iterable[int]) -> float:
        return math.fsum(self.weights[v] for v in vertices)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n, self.adj_masks, self.weights) == (other.n, other.adj_masks, other.weights)

    def __hash__(self):
        return hash((self.n, self.adj_masks, self.weights))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


# ---------------------------------------------------------------------------
# DIMACS
# ---------------------------------------------------------------------------

def _int_token(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise DimacsError(f"line {lineno}: non-numeric token {tok!r}") from None


def parse_dimacs(text: str | TextIO | Iterable[str], stats: dict | None = None) -> Graph:
    """Parse DIMACS edge format (``p edge n m``, ``e u v``, ``n v w``).

    Duplicate edges are collapsed and a declared edge count that disagrees
    with the distinct edges read only produces a warning. Both are counted in
    ``stats`` when a dict is supplied (keys ``duplicate_edges`` and
    ``edge_count_mismatch``).
    """
    lines = io.StringIO(text) if isinstance(text, str) else text
    n = None
    declared_m = 0
    edges: set[tuple[int, int]] = set()
    weights: dict[int, float] = {}
    duplicates = 0
    for lineno, raw in enumerate(lines, 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        kind = parts[0]
        if kind == "p":
            if n is not None:
                raise DimacsError(f"line {lineno}: second p line")
            if len(parts) != 4:
                raise DimacsError(f"line {lineno}: expected 'p edge <n> <m>'")
            n = _int_token(parts[2], lineno)
            declared_m = _int_token(parts[3], lineno)
            if n < 0 or declared_m < 0:
                raise DimacsError(f"line {lineno}: negative size in p line")
            continue
        if n is None:
            raise DimacsError(f"line {lineno}: missing p line before {kind!r} line")
        if kind == "e":
            if len(parts) < 3:
                raise DimacsError(f"line {lineno}: expected 'e <u> <v>'")
            u, v = _int_token(parts[1], lineno), _int_token(parts[2], lineno)
            for x in (u, v):
                if not 1 <= x <= n:
                    raise DimacsError(f"line {lineno}: endpoint {x} outside 1..{n}")
            if u == v:
                raise DimacsError(f"line {lineno}: self-loop at vertex {u}")
            key = (min(u, v) - 1, max(u, v) - 1)
            if key in edges:
                duplicates += 1
            edges.add(key)
        elif kind == "n":
            if len(parts) < 3:
                raise DimacsError(f"line {lineno}: expected 'n <v> <w>'")
            v = _int_token(parts[1], lineno)
            if not 1 <= v <= n:
                raise DimacsError(f"line {lineno}: vertex {v} outside 1..{n}")
            try:
                w = float(parts[2])
            except ValueError:
                raise DimacsError(f"line {lineno}: non-numeric token {parts[2]!r}") from None
            if not math.isfinite(w) or w <= 0:
                raise DimacsError(f"line {lineno}: weight must be finite and > 0")
            weights[v - 1] = w
        else:
            raise DimacsError(f"line {lineno}: unknown line type {kind!r}")
    if n is None:
        raise DimacsError("missing p line")

    mismatch = declared_m != len(edges) and declared_m != len(edges) + duplicates
    if duplicates:
        logger.warning("collapsed %d duplicate edge(s)", duplicates)
    if mismatch:
        logger.warning("p line declares %d edges, read %d distinct", declared_m, len(edges))
    if stats is not None:
        stats["duplicate_edges"] = duplicates
        stats["edge_count_mismatch"] = mismatch
    return Graph.from_edges(n, edges, [weights.get(v, 1.0) for v in range(n)])


def _fmt_weight(w: float) -> str:
    return str(int(w)) if float(w).is_integer() else repr(float(w))


def write_dimacs(g: Graph, comments: Iterable[str] = ()) -> str:
    out = [f"c {c}" for c in comments]
    out.append(f"p edge {g.n} {g.m}")
    out.extend(f"e {u + 1} {v + 1}" for u, v in sorted(g.edges))
    out.extend(f"n {v + 1} {_fmt_weight(w)}" for v, w in enumerate(g.weights) if w != 1.0)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 (Steele, Lea, Flood 2014); bit-identical on every platform."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


def erdos_renyi(n: int, p: float, seed: int, weights: Sequence[float] | None = None) -> Graph:
    """G(n, p): pairs (i, j), i < j, visited row-major, each kept iff a draw < p.

    One SplitMix64 draw is consumed per pair, so the instance depends only on
    ``(n, p, seed)``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = SplitMix64(seed)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.append((i, j))
    return Graph.from_edges(n, edges, weights)


def induced_subgraph(g: Graph, keep: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Subgraph induced by ``keep``; returns it with the old->new id map."""
    kept = sorted(set(keep))
    for v in kept:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} outside 0..{g.n - 1}")
    mapping = {old: new for new, old in enumerate(kept)}
    keep_mask = 0
    for v in kept:
        keep_mask |= 1 << v
    masks = []
    for old in kept:
        m = 0
        for nb in iter_bits(g.adj_masks[old] & keep_mask):
            m |= 1 << mapping[nb]
        masks.append(m)
    return Graph(len(kept), tuple(masks), tuple(g.weights[v] for v in kept)), mapping


# ---------------------------------------------------------------------------
# Orderings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VertexOrdering:
    order: tuple[int, ...]
    position: tuple[int, ...] = field(repr=False)

    @classmethod
    def from_order(cls, order: Sequence[int]) -> "VertexOrdering":
        order = tuple(order)
        pos = [-1] * len(order)
        for i, v in enumerate(order):
            if not 0 <= v < len(order) or pos[v] != -1:
                raise ValueError("order is not a permutation")
            pos[v] = i
        return cls(order, tuple(pos))

    def __len__(self):
        return len(self.order)


ORDERING_STRATEGIES = ("input", "max_degree", "degeneracy")
_ALIASES = {"maxdeg": "max_degree", "max-degree": "max_degree", "identity": "input"}


def build_ordering(g: Graph, strategy: str = "max_degree") -> VertexOrdering:
    strategy = _ALIASES.get(strategy, strategy)
    if strategy == "input":
        return VertexOrdering.from_order(range(g.n))
    if strategy == "max_degree":
        return VertexOrdering.from_order(sorted(range(g.n), key=lambda v: (-g.degree(v), v)))
    if strategy == "degeneracy":
        remaining = g.all_mask
        deg = [g.degree(v) for v in range(g.n)]
        order = []
        for _ in range(g.n):
            v = min(iter_bits(remaining), key=lambda x: (deg[x], x))
            order.append(v)
            remaining &= ~(1 << v)
            for nb in iter_bits(g.adj_masks[v] & remaining):
                deg[nb] -= 1
        return VertexOrdering.from_order(order)
    raise ValueError(f"unknown ordering strategy {strategy!r}; expected one of {ORDERING_STRATEGIES}")


def later_mask(ordering: VertexOrdering, u: int) -> int:
    """Bitset of vertices strictly after ``u`` in ``ordering``."""
    mask = 0
    for v in ordering.order[ordering.position[u] + 1:]:
        mask |= 1 << v
    return mask


def anti_neighbors_after(g: Graph, ordering: VertexOrdering, u: int) -> frozenset[int]:
    """Non-neighbours of ``u`` placed after it in ``ordering``."""
    if not 0 <= u < g.n:
        raise ValueError(f"vertex {u} outside 0..{g.n - 1}")
    return frozenset(iter_bits(later_mask(ordering, u) & ~g.adj_masks[u]))
