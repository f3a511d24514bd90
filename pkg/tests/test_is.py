import math
from dataclasses import replace
from types import SimpleNamespace

import numpy as np
import pytest

from conftest import binomial_lower_bound, random_graph
from tricolor import tricolor_is
from tricolor.tricolor_exact import exact_max_independent_set
from tricolor.tricolor_graph import Coloring, Graph, gen_planted_3col, verify_independent_set
from tricolor.tricolor_is import IsConfig, approx_independent_set, markov_failure_bound, shared_embedding
from tricolor.tricolor_rounding import RoundingConfig
from tricolor.tricolor_vector import SolverConfig, VectorEmbedding, embedding_residual, planted_embedding

SMALL = IsConfig(
    rounding=RoundingConfig(trials=4),
    solver=SolverConfig(max_iterations=2000, restarts=1),
    branch_budget=5000,
)


def test_is_config_validation():
    for kwargs in ({"repetitions": 0}, {"beta": 0.0}, {"time_cap_factor": 0.0}, {"branch_budget": 0}):
        with pytest.raises(ValueError):
            IsConfig(**kwargs)
    assert IsConfig().repetitions_for(2.5) == 3
    assert IsConfig(repetitions=7).repetitions_for(2.5) == 7


def test_is_config_from_settings():
    settings = {
        "pipeline": {"repetitions": 4, "time_cap_factor": 2.0},
        "branching": {"beta": 2.0, "budget": 123},
        "rounding": {"trials": 3, "share_embedding": False},
        "solver": {"max_iterations": 50},
    }
    cfg = IsConfig.from_settings(settings, seed=9)
    assert cfg.repetitions == 4 and cfg.beta == 2.0 and cfg.branch_budget == 123
    assert cfg.rounding.trials == 3 and cfg.rounding.seed == 9
    assert cfg.solver.max_iterations == 50 and cfg.share_embedding is False
    assert IsConfig.from_settings({"pipeline": {"repetitions": 0}}).repetitions is None


def test_markov_failure_bound():
    assert markov_failure_bound(1.5) == 1.0
    assert markov_failure_bound(2) == 1.0
    assert markov_failure_bound(10) == pytest.approx(0.2 + 0.8 * (8 / 9) ** 10)
    assert markov_failure_bound(10_000) == pytest.approx(0.2 + 0.8 / math.e, abs=1e-3)
    assert markov_failure_bound(10_000) < 1.0


def test_small_cases(k3):
    found, report = approx_independent_set(k3, 2, SMALL, seed=1)
    assert found.size == 1 and verify_independent_set(k3, found)
    assert report.repetitions_planned == 2

    found, _ = approx_independent_set(Graph.empty(10), 2, SMALL, seed=1)
    assert found.size == 10

    found, report = approx_independent_set(Graph.empty(0), 2, SMALL)
    assert found.size == 0 and report.repetitions_run == 0


def test_rejects_bad_ratio_and_embedding(k3):
    with pytest.raises(ValueError):
        approx_independent_set(k3, 0.5, SMALL)
    with pytest.raises(ValueError):
        approx_independent_set(k3, 2, SMALL, embedding=planted_embedding(Coloring((0, 1), 3)))


@pytest.mark.parametrize("seed", range(8))
def test_result_is_independent_and_matches_report(seed):
    g = random_graph(30, 0.25, seed)
    found, report = approx_independent_set(g, 3, SMALL, seed=seed)
    assert verify_independent_set(g, found)
    assert found.size >= 1
    assert report.best_size == found.size
    assert 1 <= report.repetitions_run <= report.repetitions_planned == 3
    assert report.params.r == 2.0
    payload = report.to_dict()
    assert payload["best_size"] == found.size and payload["params"]["d"] == report.params.d


def test_same_seed_same_answer(planted_small):
    g = planted_small.graph
    cfg = replace(SMALL, time_cap_factor=1e6)
    first, _ = approx_independent_set(g, 2, cfg, seed=42)
    second, _ = approx_independent_set(g, 2, cfg, seed=42)
    assert first == second


def test_budget_hits_are_reported():
    g = random_graph(40, 0.5, 2)
    cfg = replace(SMALL, branch_budget=3, repetitions=2, time_cap_factor=1e6)
    found, report = approx_independent_set(g, 2, cfg, seed=0)
    assert verify_independent_set(g, found) and found.size >= 1
    assert report.budget_hits == 2


def test_shared_embedding_switch(planted_small):
    g = planted_small.graph
    assert shared_embedding(g, replace(SMALL, share_embedding=False), 0) is None
    assert shared_embedding(Graph.empty(5), SMALL, 0) is None
    emb = shared_embedding(g, SMALL, 0)
    assert emb.vectors.shape[0] == g.vertex_count


def test_unshared_leaves_still_independent(planted_small):
    g = planted_small.graph
    found, _ = approx_independent_set(g, 2, replace(SMALL, share_embedding=False), seed=3)
    assert verify_independent_set(g, found)


@pytest.mark.slow
def test_success_rate_on_planted_instances():
    r = 4
    successes = 0
    trials = 20
    for seed in range(trials):
        g = gen_planted_3col(90, 10, seed).graph
        found, _ = approx_independent_set(g, r, IsConfig(rounding=RoundingConfig(trials=5)), seed=seed)
        assert verify_independent_set(g, found)
        successes += found.size >= g.vertex_count / (3 * r)
    assert binomial_lower_bound(successes, trials) >= 1 - markov_failure_bound(r) - 0.05


@pytest.mark.slow
def test_oracle_success_rate_on_small_random_graphs():
    r = 4
    cfg = IsConfig(rounding=RoundingConfig(trials=5))
    successes = 0
    trials = 200
    for seed in range(trials):
        n = 12 + seed % 13
        g = random_graph(n, 0.2 + 0.1 * ((seed // 13) % 4), seed)
        alpha = exact_max_independent_set(g).size
        found, _ = approx_independent_set(g, r, cfg, seed=seed)
        assert verify_independent_set(g, found)
        successes += found.size >= alpha / r
    assert binomial_lower_bound(successes, trials) >= 0.5


def test_time_cap_ignores_the_embedding_solve(planted_small, monkeypatch):
    clock = SimpleNamespace(now=0.0)
    real_shared = tricolor_is.shared_embedding

    def slow_shared(g, cfg, seed):
        emb = real_shared(g, cfg, seed)
        clock.now += 100.0
        return emb

    monkeypatch.setattr(tricolor_is, "time", SimpleNamespace(perf_counter=lambda: clock.now))
    monkeypatch.setattr(tricolor_is, "shared_embedding", slow_shared)
    found, report = approx_independent_set(planted_small.graph, 4, SMALL, seed=0)
    assert verify_independent_set(planted_small.graph, found)
    assert report.repetitions_run == report.repetitions_planned == 4
    assert not report.capped


def test_leaf_embeddings_carry_their_own_residual(planted_small, monkeypatch):
    g = planted_small.graph
    vectors = np.random.default_rng(0).standard_normal((g.vertex_count, 3))
    vectors /= np.linalg.norm(vectors, axis=1, keepdims=True)
    embedding = VectorEmbedding(3, vectors, embedding_residual(g, vectors))
    seen = []
    real_base = tricolor_is.bounded_degree_is

    def recording_base(leaf, r, rounding, solver, leaf_embedding):
        seen.append((leaf, leaf_embedding))
        return real_base(leaf, r, rounding, solver, leaf_embedding)

    monkeypatch.setattr(tricolor_is, "bounded_degree_is", recording_base)
    approx_independent_set(g, 2, replace(SMALL, repetitions=1), seed=0, embedding=embedding)
    assert seen
    for leaf, leaf_embedding in seen:
        assert leaf_embedding.residual == embedding_residual(leaf, leaf_embedding.vectors)
