import itertools
import random

import pytest

from stableset.graph import Graph, erdos_renyi, induced_subgraph
from stableset.oracle import brute_force_mwss

from conftest import empty, k3, p3, petersen


def enumerate_all(g):
    """Plain 2^n enumeration, used to cross-check the pruned oracle."""
    best = (0.0, ())
    for r in range(g.n + 1):
        for sub in itertools.combinations(range(g.n), r):
            if not g.is_stable(sub):
                continue
            val = sum(g.weights[v] for v in sub)
            if val > best[0] or (val == best[0] and sub < best[1]):
                best = (val, sub)
    return best


def test_k3():
    res = brute_force_mwss(k3())
    assert res.value == 1 and res.set == (0,)


def test_p3_weighted():
    res = brute_force_mwss(p3([1, 5, 1]))
    assert res.value == 5 and res.set == (1,)


def test_petersen():
    assert enumerate_all(petersen())[0] == 4
    assert brute_force_mwss(petersen()).value == 4


def test_cap():
    with pytest.raises(ValueError, match="refuses"):
        brute_force_mwss(empty(27))


def test_matches_full_enumeration_including_tiebreak():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(1, 11)
        w = [rng.randint(1, 4) for _ in range(n)]
        g = erdos_renyi(n, rng.choice([0.2, 0.5, 0.8]), rng.getrandbits(32), weights=w)
        res = brute_force_mwss(g)
        assert (res.value, res.set) == enumerate_all(g)
        assert g.is_stable(res.set) and g.weight_of(res.set) == res.value


def test_complement_sanity():
    w = [3, 1, 4, 1, 5]
    assert brute_force_mwss(Graph.from_edges(5, [], w)).value == sum(w)
    complete = [(u, v) for u in range(5) for v in range(u + 1, 5)]
    assert brute_force_mwss(Graph.from_edges(5, complete, w)).value == max(w)


def test_monotonicity():
    rng = random.Random(3)
    for _ in range(40):
        n = rng.randint(3, 12)
        g = erdos_renyi(n, 0.4, rng.getrandbits(32), weights=[rng.randint(1, 9) for _ in range(n)])
        base = brute_force_mwss(g).value
        missing = [(u, v) for u in range(n) for v in range(u + 1, n) if not g.has_edge(u, v)]
        if missing:
            more = Graph.from_edges(n, set(g.edges) | {rng.choice(missing)}, g.weights)
            assert brute_force_mwss(more).value <= base
        fewer, _ = induced_subgraph(g, set(range(n)) - {rng.randrange(n)})
        assert brute_force_mwss(fewer).value <= base
