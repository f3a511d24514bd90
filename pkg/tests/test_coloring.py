import math

import pytest

from conftest import random_graph
from tricolor.tricolor_coloring import PipelineConfig, approx_color, greedy_coloring, peel_round
from tricolor.tricolor_graph import Graph, gen_planted_3col, verify_coloring
from tricolor.tricolor_is import IsConfig
from tricolor.tricolor_rounding import RoundingConfig
from tricolor.tricolor_vector import SolverConfig

SMALL_IS = IsConfig(
    rounding=RoundingConfig(trials=4),
    solver=SolverConfig(max_iterations=2000, restarts=1),
    branch_budget=5000,
)
SMALL = PipelineConfig(is_config=SMALL_IS, per_round_calls=2)


def k5_plus_isolated(isolated):
    n = 5 + isolated
    return Graph.from_edges(n, [(u, v) for u in range(5) for v in range(u + 1, 5)])


def test_pipeline_config():
    with pytest.raises(ValueError):
        PipelineConfig(per_round_calls=0)
    with pytest.raises(ValueError):
        PipelineConfig(exact_budget=0)
    cfg = PipelineConfig.from_settings({"pipeline": {"per_round_calls": 0, "exact_budget": 99}}, seed=3)
    assert cfg.per_round_calls is None and cfg.exact_budget == 99
    assert cfg.is_config.rounding.seed == 3


# --- Greedy Completion ---
def test_greedy_coloring_known_graphs(k5, k33, c5):
    assert greedy_coloring(k5).colors_used == 5
    assert greedy_coloring(k33).colors_used == 2
    assert greedy_coloring(c5).colors_used == 3


@pytest.mark.parametrize("seed", range(6))
def test_greedy_coloring_is_proper(seed):
    g = random_graph(40, 0.2, seed)
    coloring = greedy_coloring(g)
    assert verify_coloring(g, coloring)
    assert coloring.colors_used <= g.max_degree + 1


# --- Peeling ---
def test_peel_round_single_vertex():
    assert peel_round(Graph.empty(1), 1.0, 3, SMALL_IS).members == (0,)


def test_peel_round_rejects_bad_input(k3):
    with pytest.raises(ValueError):
        peel_round(Graph.empty(0), 1.0, 1, SMALL_IS)
    with pytest.raises(ValueError):
        peel_round(k3, 1.0, 0, SMALL_IS)


def test_approx_color_rejects_small_ratio(k3):
    with pytest.raises(ValueError):
        approx_color(k3, 1.5, SMALL)


def test_empty_graph():
    coloring, report = approx_color(Graph.empty(0), 2, SMALL)
    assert coloring.assignment == () and report.valid and report.colors_used == 0


def test_triangle_is_peeled_vertex_by_vertex(k3):
    coloring, report = approx_color(k3, 2, SMALL, seed=1)
    assert verify_coloring(k3, coloring)
    assert report.rounds == 3 and report.colors_used == 3
    assert report.per_round_sizes == [1, 1, 1]
    assert report.exact_stage_vertices == 0 and not report.promise_violation


def test_complete_graph_uses_every_color(k5):
    coloring, report = approx_color(k5, 2, SMALL, seed=2)
    assert report.valid and report.colors_used == 5
    assert not report.promise_violation
    assert report.colors_bound == 10


def test_non_three_colorable_residual_is_flagged():
    g = k5_plus_isolated(35)
    coloring, report = approx_color(g, 2, SMALL, seed=0)
    assert report.rounds == 1 and report.per_round_sizes == [36]
    assert report.exact_stage_vertices == 4
    assert report.promise_violation
    assert report.valid and verify_coloring(g, coloring)
    assert report.colors_used == 5


def test_exact_budget_exhaustion_finishes_greedily():
    g = k5_plus_isolated(35)
    cfg = PipelineConfig(is_config=SMALL_IS, per_round_calls=1, exact_budget=1)
    coloring, report = approx_color(g, 2, cfg, seed=0)
    assert report.exact_budget_exceeded and not report.promise_violation
    assert verify_coloring(g, coloring)


@pytest.mark.parametrize("seed", range(3))
def test_planted_bookkeeping(seed):
    instance = gen_planted_3col(30, 3, seed)
    g = instance.graph
    coloring, report = approx_color(g, 2, SMALL, seed=seed)
    assert report.valid and verify_coloring(g, coloring)
    assert not report.promise_violation
    assert report.rounds == len(report.per_round_sizes) == len(report.per_round)
    assert sum(report.per_round_sizes) + report.exact_stage_vertices == g.vertex_count
    assert report.exact_stage_vertices < max(report.t, 1)
    assert report.colors_used == report.rounds + report.exact_stage_colors
    assert report.is_calls == 2 * report.rounds
    assert [rec.vertices_before for rec in report.per_round][0] == g.vertex_count
    assert report.to_dict()["leaf_counters"]["leaves_explored"] >= report.is_calls


def test_same_seed_same_coloring(planted_small):
    g = planted_small.graph
    cfg = PipelineConfig(is_config=IsConfig(
        rounding=RoundingConfig(trials=2), solver=SolverConfig(max_iterations=1000, restarts=1),
        branch_budget=2000, time_cap_factor=1e6, repetitions=1,
    ), per_round_calls=1)
    first, _ = approx_color(g, 2, cfg, seed=11)
    second, _ = approx_color(g, 2, cfg, seed=11)
    assert first == second


@pytest.mark.slow
def test_planted_60_stays_within_color_bound(planted_60):
    g = planted_60.graph
    cfg = PipelineConfig(is_config=IsConfig(rounding=RoundingConfig(trials=5)), per_round_calls=3)
    within = 0
    for seed in range(5):
        coloring, report = approx_color(g, 2, cfg, seed=seed)
        assert report.valid and not report.promise_violation
        within += report.colors_used <= 3 * 2 + 4
    assert within >= 4


@pytest.mark.parametrize("r", [2, 3])
def test_rounds_that_all_meet_their_target_bound_the_palette(r):
    met = 0
    for seed in range(6):
        instance = gen_planted_3col(40, 4, seed)
        coloring, report = approx_color(instance.graph, r, SMALL, seed=seed)
        assert verify_coloring(instance.graph, coloring)
        if report.all_rounds_met:
            met += 1
            assert report.rounds <= 3 * math.ceil(r) + 1
            assert report.colors_used <= 3 * math.ceil(r) + 4
    assert met >= 1
