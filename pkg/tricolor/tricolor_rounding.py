# === Tricolor - Cap Rounding ===
#
# Turns a vector 3-coloring into an independent set on bounded-degree graphs:
# keep the vertices whose vectors project above a threshold c on a random
# Gaussian direction, then repair the cap to independence.
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

import numpy as np

from .tricolor_graph import Graph, VertexSet, best_of
from .tricolor_log import get_logger
from .tricolor_utils import derive_seed, make_rng
from .tricolor_vector import SolverConfig, VectorEmbedding, solve_vector_3coloring

logger = get_logger(__name__)

DEFAULT_THRESHOLD_SCALES = (0.6, 0.8, 1.0, 1.2, 1.4)


@dataclass(frozen=True)
class RoundingConfig:
    trials: int = 20
    threshold_grid: Optional[Tuple[float, ...]] = None  # None -> default_threshold_grid(max degree)
    threshold_scales: Tuple[float, ...] = DEFAULT_THRESHOLD_SCALES
    seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.threshold_grid is not None:
            _check_grid(self.threshold_grid)
        _check_grid(self.threshold_scales)

    @classmethod
    def from_settings(cls, settings, seed=0):
        return cls(
            trials=settings.get('trials', 20),
            threshold_scales=tuple(settings.get('threshold_scales', DEFAULT_THRESHOLD_SCALES)),
            seed=seed,
        )

    def grid_for(self, max_degree: int) -> Tuple[float, ...]:
        if self.threshold_grid is not None:
            return tuple(self.threshold_grid)
        return default_threshold_grid(max_degree, self.threshold_scales)


def _check_grid(grid: Sequence[float]):
    if not grid:
        raise ValueError("threshold grid must not be empty")
    if any(c <= 0 for c in grid):
        raise ValueError(f"threshold grid must be positive, got {list(grid)}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError(f"threshold grid must be strictly increasing, got {list(grid)}")


def default_threshold_grid(max_degree: int, scales: Sequence[float] = DEFAULT_THRESHOLD_SCALES) -> Tuple[float, ...]:
    center = math.sqrt((2.0 / 3.0) * math.log(max_degree + 2))
    return tuple(center * s for s in scales)


# --- Cap and Repair ---
def _cap_and_repair(g: Graph, projections: np.ndarray, c: float) -> VertexSet:
    cap = set(np.flatnonzero(projections >= c).tolist())
    adjacency = g.adjacency
    conflicts = {v: sum(1 for w in adjacency[v] if w in cap) for v in cap}
    # max conflict degree first, smaller id on ties; stale heap entries are skipped
    heap = [(-k, v) for v, k in conflicts.items() if k]
    heapq.heapify(heap)
    while heap:
        neg, v = heapq.heappop(heap)
        if v not in cap or -neg != conflicts[v]:
            continue
        cap.discard(v)
        for w in adjacency[v]:
            if w in cap:
                conflicts[w] -= 1
                if conflicts[w]:
                    heapq.heappush(heap, (-conflicts[w], w))
    if not cap and g.vertex_count:
        cap = {int(np.argmax(projections))}
    return VertexSet.of(cap, independent=True)


def _projections(emb: VectorEmbedding, seed: int) -> np.ndarray:
    gvec = make_rng(seed).standard_normal(emb.dimension)
    return emb.vectors @ gvec


def hyperplane_round(g: Graph, emb: VectorEmbedding, c: float, seed: int) -> VertexSet:
    """Single cap rounding at height c; at least one vertex on nonempty graphs."""
    if c <= 0:
        raise ValueError(f"cap threshold must be positive, got {c}")
    if len(emb.vectors) != g.vertex_count:
        raise ValueError(f"embedding has {len(emb.vectors)} vectors for {g.vertex_count} vertices")
    if g.vertex_count == 0:
        return VertexSet((), True)
    return _cap_and_repair(g, _projections(emb, seed), c)


def best_rounding(g: Graph, emb: VectorEmbedding, cfg: RoundingConfig = RoundingConfig()) -> VertexSet:
    """
    Best set over every (trial, threshold) pair. Trial i uses the Gaussian of
    hyperplane_round(..., seed=derive_seed(cfg.seed, i)), so adding trials or
    thresholds only adds candidates.
    """
    grid = cfg.grid_for(g.max_degree)
    best = None
    for trial in range(cfg.trials):
        projections = _projections(emb, derive_seed(cfg.seed, trial))
        trial_best = best_of(_cap_and_repair(g, projections, c) for c in grid)
        best = best_of([s for s in (best, trial_best) if s is not None])
    return best if best is not None else VertexSet((), True)


# --- Baseline ---
def greedy_min_degree_is(g: Graph) -> VertexSet:
    """Repeatedly take a minimum-degree vertex (ties: smaller id) and drop its closed neighborhood."""
    alive = [True] * g.vertex_count
    degree = list(g.degrees)
    adjacency = g.adjacency
    heap = [(degree[v], v) for v in range(g.vertex_count)]
    heapq.heapify(heap)
    chosen = []
    while heap:
        deg, v = heapq.heappop(heap)
        if not alive[v] or deg != degree[v]:
            continue
        chosen.append(v)
        removed = [v] + [w for w in adjacency[v] if alive[w]]
        for u in removed:
            alive[u] = False
        for u in removed:
            for w in adjacency[u]:
                if alive[w]:
                    degree[w] -= 1
                    heapq.heappush(heap, (degree[w], w))
    return VertexSet.of(chosen, independent=True)


def bounded_degree_is(g: Graph, r: float, cfg: RoundingConfig = RoundingConfig(),
                      solver_cfg: SolverConfig = SolverConfig(),
                      embedding: Optional[VectorEmbedding] = None) -> VertexSet:
    """
    Base solver for degree-reduced leaves. The greedy baseline is always a
    candidate; above degree r the vector solution is rounded as well, even when
    the solver missed its tolerance (rounded sets are repaired, so still valid).
    A precomputed `embedding` of g skips the solve.
    """
    if r <= 0:
        raise ValueError(f"r must be positive, got {r}")
    if g.vertex_count == 0:
        return VertexSet((), True)
    baseline = greedy_min_degree_is(g)
    if g.max_degree <= r:
        return baseline
    if embedding is not None and len(embedding.vectors) != g.vertex_count:
        raise ValueError(f"embedding has {len(embedding.vectors)} vectors for {g.vertex_count} vertices")
    emb = embedding if embedding is not None else solve_vector_3coloring(g, solver_cfg)
    if not emb.reached:
        logger.debug(f"rounding an unconverged embedding (residual {emb.residual:.3e}) on n={g.vertex_count}")
    rounded = best_rounding(g, emb, cfg)
    result = best_of([baseline, rounded])
    logger.debug(
        f"bounded-degree IS n={g.vertex_count} max_degree={g.max_degree}: "
        f"baseline {baseline.size}, rounded {rounded.size}"
    )
    return result


def reseeded(cfg: RoundingConfig, solver_cfg: SolverConfig, seed: int):
    """Independent rounding and solver streams for one call site."""
    return replace(cfg, seed=derive_seed(seed, 0)), replace(solver_cfg, seed=derive_seed(seed, 1))
