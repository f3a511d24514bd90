# === Tricolor - Approximate Independent Set ===
#
# IS(G, r): degree reduction at the half ratio over the bounded-degree cap
# rounding base, repeated ceil(r) times with derived seeds. A wall-clock cap of
# time_cap_factor * ceil(r) * (duration of the first repetition) stops the
# repetitions early; whatever was found by then is returned.
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field, replace
from typing import List, Optional

from .tricolor_branching import (
    DEFAULT_BRANCH_BUDGET,
    ApproxParams,
    BranchStats,
    degree_reduce_is,
    derive_params,
)
from .tricolor_errors import BudgetExceededError
from .tricolor_graph import Graph, VertexSet, best_of
from .tricolor_log import get_logger
from .tricolor_rounding import RoundingConfig, bounded_degree_is, greedy_min_degree_is, reseeded
from .tricolor_utils import derive_seed, elapsed_ms
from .tricolor_vector import SolverConfig, VectorEmbedding, restrict_embedding, solve_vector_3coloring

logger = get_logger(__name__)

MIN_REPETITION_SECONDS = 0.001


@dataclass(frozen=True)
class IsConfig:
    repetitions: Optional[int] = None  # None -> ceil(r)
    beta: float = 1.0
    rounding: RoundingConfig = field(default_factory=RoundingConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    time_cap_factor: float = 5.0
    branch_budget: int = DEFAULT_BRANCH_BUDGET
    share_embedding: bool = True

    def __post_init__(self):
        if self.repetitions is not None and self.repetitions < 1:
            raise ValueError(f"repetitions must be positive, got {self.repetitions}")
        if self.beta <= 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if self.time_cap_factor <= 0:
            raise ValueError(f"time_cap_factor must be positive, got {self.time_cap_factor}")
        if self.branch_budget <= 0:
            raise ValueError(f"branch_budget must be positive, got {self.branch_budget}")

    @classmethod
    def from_settings(cls, all_settings, seed=0):
        pipeline = all_settings.get('pipeline', {})
        branching = all_settings.get('branching', {})
        repetitions = pipeline.get('repetitions', 0)
        return cls(
            repetitions=repetitions if repetitions and repetitions > 0 else None,
            beta=branching.get('beta', 1.0),
            rounding=RoundingConfig.from_settings(all_settings.get('rounding', {}), seed),
            solver=SolverConfig.from_settings(all_settings.get('solver', {}), seed),
            time_cap_factor=pipeline.get('time_cap_factor', 5.0),
            branch_budget=branching.get('budget', DEFAULT_BRANCH_BUDGET),
            share_embedding=all_settings.get('rounding', {}).get('share_embedding', True),
        )

    def repetitions_for(self, r: float) -> int:
        return self.repetitions if self.repetitions is not None else math.ceil(r)


def markov_failure_bound(r: float) -> float:
    """
    Failure probability bound of the boosted procedure: 1/5 for overrunning
    the time cap plus (4/5) * P[r runs all miss], each run succeeding
    with probability >= 1/(r-1). Approaches 1/5 + 4/(5e) for large r; vacuous
    (1.0) for r <= 2.
    """
    if r <= 2:
        return 1.0
    return 1.0 / 5.0 + 0.8 * (1.0 - 1.0 / (r - 1.0)) ** r


@dataclass
class IsReport:
    r: float
    n: int
    sizes: List[int] = field(default_factory=list)
    repetitions_planned: int = 0
    repetitions_run: int = 0
    capped: bool = False
    budget_hits: int = 0
    stats: BranchStats = field(default_factory=BranchStats)
    params: Optional[ApproxParams] = None
    failure_bound: float = 0.0
    wall_ms: int = 0

    @property
    def best_size(self) -> int:
        return max(self.sizes, default=0)

    def to_dict(self):
        payload = asdict(self)
        payload['params'] = self.params.to_dict() if self.params else None
        payload['best_size'] = self.best_size
        return payload


def _one_repetition(g, params, cfg, seed, should_stop, embedding):
    """Returns (set, stats, budget_hit, deadline_hit)."""
    calls = [0]

    def base(leaf: Graph, ids) -> VertexSet:
        calls[0] += 1
        rounding, solver = reseeded(cfg.rounding, cfg.solver, derive_seed(seed, calls[0]))
        leaf_embedding = restrict_embedding(embedding, ids, leaf) if embedding is not None else None
        return bounded_degree_is(leaf, params.r_prime, rounding, solver, leaf_embedding)

    try:
        found, stats = degree_reduce_is(g, params, base, cfg.branch_budget, should_stop, pass_ids=True)
        return found, stats, False, False
    except BudgetExceededError as e:
        stats = e.stats or BranchStats(nodes_expanded=e.nodes_expanded)
        return e.best, stats, e.reason == "budget", e.reason == "deadline"


def shared_embedding(g: Graph, cfg: IsConfig, seed: int) -> Optional[VectorEmbedding]:
    """One vector 3-coloring of g for all leaves, or None when leaves solve their own."""
    if not cfg.share_embedding or g.edge_count == 0:
        return None
    return solve_vector_3coloring(g, replace(cfg.solver, seed=derive_seed(seed)))


def approx_independent_set(g: Graph, r: float, cfg: IsConfig = IsConfig(), seed: int = 0,
                           embedding: Optional[VectorEmbedding] = None):
    """
    Returns (VertexSet, IsReport). Never raises on budget or deadline; the set
    is always independent. `embedding` (a vector 3-coloring of g) is reused
    across repetitions when given; otherwise one is solved when
    cfg.share_embedding is set.
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    start = time.perf_counter()
    n = g.vertex_count
    report = IsReport(r=r, n=n, failure_bound=markov_failure_bound(r))
    if n == 0:
        return VertexSet((), True), report

    params = derive_params(n, max(2.0, r / 2.0), cfg.beta)
    report.params = params
    planned = cfg.repetitions_for(r)
    report.repetitions_planned = planned
    if embedding is None:
        embedding = shared_embedding(g, cfg, seed)
    elif len(embedding.vectors) != n:
        raise ValueError(f"embedding has {len(embedding.vectors)} vectors for {n} vertices")
    deadline = [None]

    def should_stop():
        return deadline[0] is not None and time.perf_counter() > deadline[0]

    best = None
    for rep in range(planned):
        rep_start = time.perf_counter()
        found, stats, budget_hit, deadline_hit = _one_repetition(
            g, params, cfg, derive_seed(seed, rep), should_stop, embedding,
        )
        report.stats = report.stats.merge(stats)
        if budget_hit:
            report.budget_hits += 1
            logger.warning(f"repetition {rep}: branch budget of {cfg.branch_budget} nodes exhausted, keeping best so far")
        if found is not None and found.size:
            report.sizes.append(found.size)
            best = best_of([s for s in (best, found) if s is not None])
        report.repetitions_run += 1
        if deadline_hit:
            report.capped = True
            logger.warning(f"time cap reached after {report.repetitions_run} of {planned} repetitions")
            break
        if deadline[0] is None:
            tau = max(time.perf_counter() - rep_start, MIN_REPETITION_SECONDS)
            deadline[0] = rep_start + cfg.time_cap_factor * math.ceil(r) * tau
        elif should_stop() and rep + 1 < planned:
            report.capped = True
            logger.warning(f"time cap reached after {report.repetitions_run} of {planned} repetitions")
            break

    if best is None or best.size == 0:
        best = greedy_min_degree_is(g)
        report.sizes.append(best.size)
    report.wall_ms = elapsed_ms(start)
    logger.debug(f"IS n={n} r={r}: best {best.size} over {report.repetitions_run} repetitions")
    return best, report
