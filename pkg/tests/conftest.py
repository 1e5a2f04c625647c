import random

import pytest

from stableset.graph import Graph, erdos_renyi

_ACCEPTANCE_LINES: list[str] = []


def petersen() -> Graph:
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    edges += [(i, i + 5) for i in range(5)]
    return Graph.from_edges(10, edges)


def c5() -> Graph:
    return Graph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])


def p3(weights=None) -> Graph:
    return Graph.from_edges(3, [(0, 1), (1, 2)], weights)


def k3() -> Graph:
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


def empty(n=3) -> Graph:
    return Graph.from_edges(n, [])


def random_instances(count, seed, n_range=(4, 18), densities=(0.2, 0.5, 0.8), real=False):
    """Oracle-suite instances: alternating unit and integer 1..10 weights."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(*n_range)
        p = rng.choice(densities)
        if real:
            w = [rng.uniform(0.5, 5.0) for _ in range(n)]
        elif i % 2:
            w = [rng.randint(1, 10) for _ in range(n)]
        else:
            w = None
        out.append(erdos_renyi(n, p, rng.getrandbits(64), weights=w))
    return out


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
