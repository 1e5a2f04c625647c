import math

import pytest
from hypothesis import given, settings, strategies as st

from stableset.graph import (DimacsError, Graph, SplitMix64, anti_neighbors_after, build_ordering,
                             erdos_renyi, induced_subgraph, parse_dimacs, write_dimacs)

from conftest import c5, p3


@st.composite
def graphs(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    weights = draw(st.lists(st.integers(1, 9), min_size=n, max_size=n))
    return Graph.from_edges(n, edges, weights)


def test_parse_p3():
    g = parse_dimacs("p edge 3 2\ne 1 2\ne 2 3")
    assert g.n == 3
    assert g.edges == {(0, 1), (1, 2)}
    assert g.weights == (1.0, 1.0, 1.0)


def test_parse_vertex_weights():
    g = parse_dimacs("p edge 3 2\ne 1 2\ne 2 3\nn 2 5")
    assert g.weights == (1.0, 5.0, 1.0)
    assert g.integral


def test_parse_missing_p_line():
    with pytest.raises(DimacsError, match="missing p line"):
        parse_dimacs("e 1 2")
    with pytest.raises(DimacsError, match="missing p line"):
        parse_dimacs("c nothing here\n")


@pytest.mark.parametrize("text, msg", [
    ("p edge 3 1\ne 1 4", "outside"),
    ("p edge 3 1\ne 0 2", "outside"),
    ("p edge 3 1\ne 2 2", "self-loop"),
    ("p edge 3 1\ne 1 x", "non-numeric"),
    ("p edge three 1", "non-numeric"),
    ("p edge 3 1\nn 1 abc", "non-numeric"),
])
def test_parse_errors(text, msg):
    with pytest.raises(DimacsError, match=msg):
        parse_dimacs(text)


def test_parse_duplicates_and_mismatch_are_warnings():
    stats = {}
    g = parse_dimacs("c hi\np edge 3 5\ne 1 2\ne 2 1\ne 2 3\n", stats)
    assert g.m == 2
    assert stats == {"duplicate_edges": 1, "edge_count_mismatch": True}
    stats = {}
    parse_dimacs("p edge 3 2\ne 1 2\ne 2 3\n", stats)
    assert stats == {"duplicate_edges": 0, "edge_count_mismatch": False}


@given(graphs())
def test_dimacs_roundtrip(g):
    assert parse_dimacs(write_dimacs(g, ["seed=1 p=0.5"])) == g


def test_dimacs_roundtrip_real_weights():
    g = Graph.from_edges(3, [(0, 2)], [0.1, 2.5, 1 / 3])
    assert parse_dimacs(write_dimacs(g)) == g


@given(graphs())
def test_graph_invariants(g):
    for u in range(g.n):
        assert u not in g.adjacency[u]
        for v in g.adjacency[u]:
            assert u in g.adjacency[v]
    assert g.m == sum(len(a) for a in g.adjacency) // 2 == len(g.edges)
    assert all(math.isfinite(w) and w > 0 for w in g.weights)


@pytest.mark.parametrize("weights", [[1, 0, 1], [1, -2, 1], [1, float("inf"), 1], [1, 1]])
def test_bad_weights(weights):
    with pytest.raises(ValueError):
        Graph.from_edges(3, [], weights)


def test_erdos_renyi_extremes_and_determinism():
    assert erdos_renyi(4, 0.0, 123).m == 0
    assert erdos_renyi(4, 1.0, 123).m == 6
    a, b = erdos_renyi(10, 0.5, 42), erdos_renyi(10, 0.5, 42)
    assert write_dimacs(a) == write_dimacs(b)
    assert erdos_renyi(10, 0.5, 43) != a


def test_erdos_renyi_frozen_stream():
    # golden instance so other ports can compare streams
    g = erdos_renyi(6, 0.5, 1)
    assert sorted(g.edges) == [(0, 4), (0, 5), (1, 5), (2, 4), (3, 4), (4, 5)]
    # published SplitMix64 outputs for seed 0
    rng = SplitMix64(0)
    assert [rng.next_u64() for _ in range(3)] == [
        0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def test_erdos_renyi_edge_count_distribution():
    n, p, trials = 20, 0.5, 1000
    pairs = n * (n - 1) // 2
    mean, sd = pairs * p, math.sqrt(pairs * p * (1 - p))
    counts = [erdos_renyi(n, p, seed).m for seed in range(trials)]
    assert all(abs(c - mean) <= 4 * sd for c in counts)
    assert abs(sum(counts) / trials - mean) <= 4 * sd / math.sqrt(trials)


@pytest.mark.parametrize("n, p", [(0, 0.5), (3, -0.1), (3, 1.5)])
def test_erdos_renyi_preconditions(n, p):
    with pytest.raises(ValueError):
        erdos_renyi(n, p, 0)


def test_induced_subgraph():
    sub, mapping = induced_subgraph(c5(), {0, 1, 2})
    assert sub.n == 3 and sub.edges == {(0, 1), (1, 2)}
    assert mapping == {0: 0, 1: 1, 2: 2}
    g = c5()
    assert induced_subgraph(g, range(5))[0] == g
    empty, mapping = induced_subgraph(g, set())
    assert empty.n == 0 and mapping == {}
    with pytest.raises(ValueError):
        induced_subgraph(g, {7})


def test_induced_subgraph_carries_weights_and_order():
    g = p3([1, 5, 2])
    sub, mapping = induced_subgraph(g, [2, 0])
    assert mapping == {0: 0, 2: 1}
    assert sub.weights == (1.0, 2.0) and sub.m == 0


def test_orderings():
    assert list(build_ordering(p3(), "max_degree").order) == [1, 0, 2]
    assert list(build_ordering(c5(), "degeneracy").order) == [0, 1, 2, 3, 4]
    assert list(build_ordering(c5(), "input").order) == [0, 1, 2, 3, 4]
    assert build_ordering(p3(), "maxdeg") == build_ordering(p3(), "max_degree")
    with pytest.raises(ValueError, match="unknown ordering"):
        build_ordering(p3(), "random")


def test_degeneracy_star():
    # star centre 0 with leaves 1..3 plus edge 2-3: leaf 1 (deg 1) goes first
    g = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (2, 3)])
    assert list(build_ordering(g, "degeneracy").order) == [1, 0, 2, 3]


@given(graphs(), st.sampled_from(["input", "max_degree", "degeneracy"]))
def test_ordering_is_permutation(g, strategy):
    ord_ = build_ordering(g, strategy)
    assert sorted(ord_.order) == list(range(g.n))
    assert all(ord_.position[ord_.order[i]] == i for i in range(g.n))


def test_anti_neighbors_after():
    ident = build_ordering(p3(), "input")
    assert anti_neighbors_after(p3(), ident, 0) == {2}
    assert anti_neighbors_after(p3(), ident, 2) == set()
    assert anti_neighbors_after(c5(), build_ordering(c5(), "input"), 0) == {2, 3}
    with pytest.raises(ValueError):
        anti_neighbors_after(p3(), ident, 3)


@settings(max_examples=60)
@given(graphs(), st.sampled_from(["input", "max_degree", "degeneracy"]))
def test_anti_neighbourhoods_cover_and_avoid_neighbours(g, strategy):
    ord_ = build_ordering(g, strategy)
    covered = set()
    for u in range(g.n):
        block = anti_neighbors_after(g, ord_, u)
        assert u not in block
        assert not block & set(g.adjacency[u])
        assert all(ord_.position[v] > ord_.position[u] for v in block)
        covered |= block | {u}
    assert covered == set(range(g.n))
