import math

import pytest

from conftest import random_graph
from tricolor.tricolor_branching import (
    ApproxParams,
    BranchStats,
    degree_reduce_is,
    derive_params,
    leaf_count_bound,
    ratio_from_epsilon,
    runtime_exponents,
)
from tricolor.tricolor_errors import BudgetExceededError
from tricolor.tricolor_exact import exact_max_independent_set
from tricolor.tricolor_graph import Graph, verify_independent_set
from tricolor.tricolor_rounding import RoundingConfig, bounded_degree_is, greedy_min_degree_is
from tricolor.tricolor_vector import SolverConfig


# --- Parameters ---
def test_derive_params_reference_values():
    assert derive_params(8000, 2).t == pytest.approx(1000.0)
    assert derive_params(100, 16).r_prime == pytest.approx(16 / math.log(16 ** 3))
    assert derive_params(100, 16).r_prime == pytest.approx(1.9235, abs=1e-3)
    small = derive_params(60, 2)
    assert small.d == 5 and small.r_prime == 1.0 and small.batch == small.d


@pytest.mark.parametrize("n", [1, 60, 500, 8000])
@pytest.mark.parametrize("r", [2, 2.5, 3, 8, 16])
def test_derive_params_formulas(n, r):
    p = derive_params(n, r)
    assert p.t == pytest.approx(n / r ** 3)
    assert p.r_prime == pytest.approx(max(1.0, r / math.log(r ** 3)))
    assert p.d == max(math.ceil(2 * r) + 1, math.ceil(r ** 3 / math.log(r + math.e) ** 1.5))
    assert p.d >= 2 * r and p.r_prime >= 1


def test_derive_params_beta_scales_degree():
    assert derive_params(100, 8, beta=4.0).d > derive_params(100, 8, beta=1.0).d


@pytest.mark.parametrize("n, r, beta", [(10, 1.5, 1.0), (0, 2, 1.0), (10, 2, 0.0), (10, 2, -1.0)])
def test_derive_params_rejects_bad_input(n, r, beta):
    with pytest.raises(ValueError):
        derive_params(n, r, beta)


def test_approx_params_invariants():
    with pytest.raises(ValueError):
        ApproxParams(r=4, d=7, r_prime=1.0, t=1.0, batch=7)
    with pytest.raises(ValueError):
        ApproxParams(r=2, d=5, r_prime=0.5, t=1.0, batch=5)
    with pytest.raises(ValueError):
        ApproxParams(r=2, d=5, r_prime=1.0, t=1.0, batch=4)


def test_ratio_from_epsilon():
    assert ratio_from_epsilon(1000, 0.25) == pytest.approx(1000 ** 0.25)
    for eps in (0.0, 1 / 3, 0.5, -0.1):
        with pytest.raises(ValueError):
            ratio_from_epsilon(1000, eps)


def test_runtime_exponents_and_leaf_bound():
    exps = runtime_exponents(1000, 4)
    assert set(exps) == {"independent_set", "coloring", "exact_stage"}
    assert exps["coloring"] > exps["independent_set"] > 0
    assert leaf_count_bound(0, derive_params(1, 2)) == pytest.approx(4.0)


def test_branch_stats_merge():
    a = BranchStats(leaves_explored=2, max_depth=3, nodes_expanded=5, min_take_removal=None)
    b = BranchStats(leaves_explored=1, max_depth=1, nodes_expanded=4, base_shortfalls=1, min_take_removal=7)
    merged = a.merge(b)
    assert merged.leaves_explored == 3 and merged.max_depth == 3 and merged.nodes_expanded == 9
    assert merged.base_shortfalls == 1 and merged.min_take_removal == 7


# --- Search ---
def test_star_branches_once(star10):
    params = derive_params(11, 2)
    found, stats = degree_reduce_is(star10, params, exact_max_independent_set)
    assert found.members == tuple(range(1, 11))
    assert stats.leaves_explored == 2 and stats.max_depth == 1
    assert stats.min_take_removal == 11


def test_low_degree_graph_is_a_single_leaf(c5, petersen):
    for g in (c5, petersen):
        found, stats = degree_reduce_is(g, derive_params(g.vertex_count, 2), exact_max_independent_set)
        assert stats.leaves_explored == 1 and stats.max_depth == 0
        assert found.size == exact_max_independent_set(g).size


def test_empty_graph():
    found, stats = degree_reduce_is(Graph.empty(0), derive_params(1, 2), greedy_min_degree_is)
    assert found.size == 0 and stats.leaves_explored == 1


@pytest.mark.parametrize("seed", range(200))
def test_exact_base_gives_exact_answer(seed):
    n = 8 + seed % 11
    g = random_graph(n, 0.3 + 0.1 * ((seed // 11) % 5), seed)
    params = derive_params(n, 2)
    found, stats = degree_reduce_is(g, params, exact_max_independent_set, budget=2_000_000)
    assert verify_independent_set(g, found)
    assert found.size == exact_max_independent_set(g).size
    assert stats.leaves_explored <= leaf_count_bound(n, params)
    if stats.min_take_removal is not None:
        assert stats.min_take_removal >= params.d + 2


def test_no_base_shortfall_means_the_ratio_is_met():
    met = 0
    for seed in range(20):
        n = 14 + seed % 9
        g = random_graph(n, 0.3, seed)
        params = derive_params(n, 2)
        rounding, solver = RoundingConfig(trials=4, seed=seed), SolverConfig(max_iterations=2000, restarts=1, seed=seed)
        found, stats = degree_reduce_is(
            g, params, lambda leaf: bounded_degree_is(leaf, params.r_prime, rounding, solver), budget=50_000,
        )
        assert verify_independent_set(g, found)
        if stats.base_shortfalls == 0:
            met += 1
            alpha = exact_max_independent_set(g).size
            assert found.size >= math.ceil(alpha / (3 * params.r_prime))
    assert met >= 1


@pytest.mark.parametrize("seed", range(5))
def test_leaves_passed_to_base_are_degree_bounded(seed):
    g = random_graph(24, 0.35, seed)
    params = derive_params(24, 2)
    seen = []

    def base(leaf, ids):
        assert leaf.max_degree <= params.d
        assert len(ids) == leaf.vertex_count and all(0 <= v < g.vertex_count for v in ids)
        seen.append(leaf.vertex_count)
        return greedy_min_degree_is(leaf)

    found, stats = degree_reduce_is(g, params, base, budget=2_000_000, pass_ids=True)
    assert len(seen) == stats.leaves_explored
    assert verify_independent_set(g, found)
    assert found.size >= 1


def test_budget_exceeded_carries_valid_best():
    g = random_graph(30, 0.5, 3)
    params = derive_params(30, 2)
    with pytest.raises(BudgetExceededError) as info:
        degree_reduce_is(g, params, greedy_min_degree_is, budget=40)
    err = info.value
    assert err.reason == "budget"
    assert err.stats.nodes_expanded == 40
    assert verify_independent_set(g, err.best)


def test_should_stop_raises_deadline():
    g = random_graph(30, 0.5, 3)
    with pytest.raises(BudgetExceededError) as info:
        degree_reduce_is(g, derive_params(30, 2), greedy_min_degree_is, should_stop=lambda: True)
    assert info.value.reason == "deadline"
    assert info.value.best.size == 0


def test_rejects_nonpositive_budget(k3):
    with pytest.raises(ValueError):
        degree_reduce_is(k3, derive_params(3, 2), greedy_min_degree_is, budget=0)
