import networkx as nx
import pytest

from conftest import complete_graph, cycle_graph, random_graph
from tricolor.tricolor_errors import BudgetExceededError
from tricolor.tricolor_exact import (
    bitmask_max_independent_set,
    exact_3color,
    exact_max_independent_set,
    three_colorable_bruteforce,
)
from tricolor.tricolor_graph import Graph, from_networkx, to_networkx, verify_coloring, verify_independent_set


# --- Maximum independent set ---
@pytest.mark.parametrize("fixture,alpha", [("k3", 1), ("k5", 1), ("c5", 2), ("k33", 3), ("star10", 10), ("petersen", 4)])
def test_exact_mis_on_known_graphs(request, fixture, alpha):
    g = request.getfixturevalue(fixture)
    found = exact_max_independent_set(g)
    assert found.size == alpha
    assert found.independent and verify_independent_set(g, found)


def test_exact_mis_empty_and_edgeless():
    assert exact_max_independent_set(Graph.empty(0)).size == 0
    assert exact_max_independent_set(Graph.empty(7)).members == tuple(range(7))


def test_exact_mis_returns_lexicographically_smallest_maximum():
    # path 0-1-2-3: maximum sets {0,2}, {0,3}, {1,3}
    path = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert exact_max_independent_set(path).members == (0, 2)
    assert bitmask_max_independent_set(path).members == (0, 2)


@pytest.mark.parametrize("seed", range(25))
def test_branch_and_bound_agrees_with_subset_enumeration(seed):
    g = random_graph(4 + seed % 11, 0.15 + 0.03 * (seed % 7), seed)
    bb = exact_max_independent_set(g)
    brute = bitmask_max_independent_set(g)
    assert bb == brute
    complement = nx.complement(to_networkx(g))
    assert bb.size == max(len(clique) for clique in nx.find_cliques(complement))


def test_exact_mis_budget_exceeded_carries_valid_best(petersen):
    with pytest.raises(BudgetExceededError) as info:
        exact_max_independent_set(petersen, budget=3)
    best = info.value.best
    assert best is not None and verify_independent_set(petersen, best)
    assert info.value.reason == "budget"


def test_bitmask_limit():
    with pytest.raises(ValueError):
        bitmask_max_independent_set(Graph.empty(21))


# --- 3-coloring ---
@pytest.mark.parametrize("fixture,colorable", [
    ("k3", True), ("k4", False), ("k5", False), ("c5", True), ("k33", True), ("petersen", True),
])
def test_exact_3color_on_known_graphs(request, fixture, colorable):
    g = request.getfixturevalue(fixture)
    coloring = exact_3color(g)
    assert (coloring is not None) == colorable
    if coloring is not None:
        assert coloring.palette_size == 3
        assert verify_coloring(g, coloring)


def test_exact_3color_empty_graph():
    coloring = exact_3color(Graph.empty(0))
    assert coloring is not None and coloring.assignment == ()


def test_exact_3color_uses_a_contiguous_palette():
    coloring = exact_3color(cycle_graph(7))
    assert sorted(set(coloring.assignment)) == [0, 1, 2]
    assert sorted(set(exact_3color(cycle_graph(6)).assignment)) == [0, 1]


def test_exact_3color_planted(planted_60):
    coloring = exact_3color(planted_60.graph)
    assert coloring is not None and verify_coloring(planted_60.graph, coloring)


def test_exact_3color_budget():
    wheel = from_networkx(nx.wheel_graph(12))  # odd rim of 11 plus hub: 4-chromatic
    with pytest.raises(BudgetExceededError):
        exact_3color(wheel, budget=2)


@pytest.mark.parametrize("seed", range(20))
def test_exact_3color_agrees_with_bruteforce(seed):
    g = random_graph(5 + seed % 7, 0.3 + 0.02 * seed, seed)
    assert (exact_3color(g) is not None) == three_colorable_bruteforce(g)


def test_bruteforce_small_cases(k4):
    assert three_colorable_bruteforce(Graph.empty(0))
    assert three_colorable_bruteforce(complete_graph(3))
    assert not three_colorable_bruteforce(k4)
    with pytest.raises(ValueError):
        three_colorable_bruteforce(Graph.empty(13))
