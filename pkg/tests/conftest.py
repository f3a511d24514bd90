import math

import networkx as nx
import pytest

from tricolor.tricolor_graph import Graph, from_networkx, gen_planted_3col


def complete_graph(n):
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle_graph(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves):
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def random_graph(n, p, seed):
    return from_networkx(nx.gnp_random_graph(n, p, seed=seed))


def binomial_lower_bound(successes, trials, z=1.645):
    """One-sided Wilson lower bound on a success probability (95% for z=1.645)."""
    if trials == 0:
        return 0.0
    phat = successes / trials
    denom = 1 + z * z / trials
    center = phat + z * z / (2 * trials)
    margin = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials))
    return (center - margin) / denom


@pytest.fixture
def k3():
    return complete_graph(3)


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def k5():
    return complete_graph(5)


@pytest.fixture
def c5():
    return cycle_graph(5)


@pytest.fixture
def k33():
    return Graph.from_edges(6, [(u, v) for u in range(3) for v in range(3, 6)])


@pytest.fixture
def star10():
    return star_graph(10)


@pytest.fixture
def petersen():
    return from_networkx(nx.petersen_graph())


@pytest.fixture
def planted_small():
    return gen_planted_3col(30, 3, seed=5)


@pytest.fixture
def planted_60():
    return gen_planted_3col(60, 8, seed=1)
