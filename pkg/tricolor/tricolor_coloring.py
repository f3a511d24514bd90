# === Tricolor - Peeling Colorer ===
#
# Colors a graph promised to be 3-colorable: while at least max(t, 1)
# vertices remain, peel the best of `per_round_calls` approximate independent
# sets at ratio r' as a fresh color class; finish the residual exactly.
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from typing import List, Optional

from .tricolor_branching import BranchStats, derive_params, runtime_exponents
from .tricolor_errors import BudgetExceededError
from .tricolor_exact import DEFAULT_COLOR_BUDGET, exact_3color
from .tricolor_graph import Coloring, Graph, VertexSet, best_of, delete_vertices, verify_coloring
from .tricolor_is import IsConfig, approx_independent_set, shared_embedding
from .tricolor_log import get_logger
from .tricolor_utils import current_rss_mb, derive_seed, elapsed_ms

logger = get_logger(__name__)


@dataclass(frozen=True)
class PipelineConfig:
    is_config: IsConfig = field(default_factory=IsConfig)
    per_round_calls: Optional[int] = None  # None -> n
    exact_budget: int = DEFAULT_COLOR_BUDGET

    def __post_init__(self):
        if self.per_round_calls is not None and self.per_round_calls < 1:
            raise ValueError(f"per_round_calls must be positive, got {self.per_round_calls}")
        if self.exact_budget <= 0:
            raise ValueError(f"exact_budget must be positive, got {self.exact_budget}")

    @classmethod
    def from_settings(cls, all_settings, seed=0):
        pipeline = all_settings.get('pipeline', {})
        calls = pipeline.get('per_round_calls', 0)
        return cls(
            is_config=IsConfig.from_settings(all_settings, seed),
            per_round_calls=calls if calls and calls > 0 else None,
            exact_budget=pipeline.get('exact_budget', DEFAULT_COLOR_BUDGET),
        )


@dataclass
class RoundRecord:
    round_index: int
    vertices_before: int
    size: int
    calls: int
    wall_ms: int
    met_bound: bool


@dataclass
class RunReport:
    n: int
    m: int
    r: float
    seed: int
    colors_used: int = 0
    rounds: int = 0
    is_calls: int = 0
    per_round_sizes: List[int] = field(default_factory=list)
    leaf_counters: BranchStats = field(default_factory=BranchStats)
    promise_violation: bool = False
    wall_ms: int = 0
    valid: bool = False
    # diagnostics
    t: float = 0.0
    r_prime: float = 1.0
    d: int = 0
    per_round_calls: int = 0
    repetitions: int = 0
    colors_bound: int = 0
    all_rounds_met: bool = True
    per_round: List[RoundRecord] = field(default_factory=list)
    exact_stage_vertices: int = 0
    exact_stage_colors: int = 0
    exact_budget_exceeded: bool = False
    peak_rss_mb: float = 0.0
    runtime_exponents: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


# --- Greedy Completion ---
def greedy_coloring(g: Graph) -> Coloring:
    """DSATUR: most distinct neighbor colors first, then degree, then smaller id; smallest free color."""
    n = g.vertex_count
    colors = [-1] * n
    neighbor_colors = [set() for _ in range(n)]
    degrees = g.degrees
    for _ in range(n):
        v = min((u for u in range(n) if colors[u] == -1),
                key=lambda u: (-len(neighbor_colors[u]), -degrees[u], u))
        c = 0
        while c in neighbor_colors[v]:
            c += 1
        colors[v] = c
        for w in g.adjacency[v]:
            neighbor_colors[w].add(c)
    return Coloring.of(colors)


# --- Peeling ---
def _peel_round_detailed(current: Graph, r_prime: float, calls: int, cfg: IsConfig, seed: int):
    if current.vertex_count == 0:
        raise ValueError("peel_round needs a nonempty graph")
    if calls < 1:
        raise ValueError(f"calls must be positive, got {calls}")
    embedding = shared_embedding(current, cfg, seed)
    best = None
    reports = []
    for call in range(calls):
        found, report = approx_independent_set(current, r_prime, cfg, derive_seed(seed, call), embedding)
        reports.append(report)
        best = best_of([s for s in (best, found) if s is not None])
    return best, reports


def peel_round(current: Graph, r_prime: float, calls: int, cfg: IsConfig = IsConfig(), seed: int = 0) -> VertexSet:
    """Largest of `calls` approximate independent sets of `current` at ratio r_prime."""
    best, _ = _peel_round_detailed(current, r_prime, calls, cfg, seed)
    return best


def approx_color(g: Graph, r: float, cfg: PipelineConfig = PipelineConfig(), seed: int = 0):
    """
    Returns (Coloring, RunReport). The coloring is always valid: a residual that
    turns out not to be 3-colorable (or exhausts the exact budget) is finished
    greedily and flagged in the report.
    """
    if r < 2:
        raise ValueError(f"r must be >= 2, got {r}")
    start = time.perf_counter()
    n = g.vertex_count
    report = RunReport(n=n, m=g.edge_count, r=r, seed=seed, colors_bound=3 * math.ceil(r) + 4)
    if n == 0:
        report.valid = True
        return Coloring((), 1), report

    params = derive_params(n, r, cfg.is_config.beta)
    calls = cfg.per_round_calls if cfg.per_round_calls is not None else n
    report.t, report.r_prime, report.d = params.t, params.r_prime, params.d
    report.per_round_calls = calls
    report.repetitions = cfg.is_config.repetitions_for(params.r_prime)
    report.runtime_exponents = runtime_exponents(n, r)

    colors = [-1] * n
    next_color = 0
    current, id_map = g, tuple(range(n))
    guard = max(params.t, 1.0)

    while current.vertex_count >= guard:
        round_start = time.perf_counter()
        vertices_before = current.vertex_count
        round_seed = derive_seed(seed, report.rounds)
        found, is_reports = _peel_round_detailed(current, params.r_prime, calls, cfg.is_config, round_seed)
        for v in found:
            colors[id_map[v]] = next_color
        next_color += 1
        met = found.size >= vertices_before / (3 * params.r_prime)
        report.all_rounds_met = report.all_rounds_met and met
        report.is_calls += len(is_reports)
        for is_report in is_reports:
            report.leaf_counters = report.leaf_counters.merge(is_report.stats)
        report.per_round_sizes.append(found.size)
        report.per_round.append(RoundRecord(
            report.rounds, vertices_before, found.size, len(is_reports), elapsed_ms(round_start), met,
        ))
        report.rounds += 1
        current, mapping = delete_vertices(current, found)
        id_map = tuple(id_map[x] for x in mapping)
        logger.info(f"round {report.rounds}: peeled {found.size} of {vertices_before} vertices, {current.vertex_count} left")

    # Exact stage on the residual
    report.exact_stage_vertices = current.vertex_count
    try:
        residual_coloring = exact_3color(current, cfg.exact_budget)
    except BudgetExceededError as e:
        logger.warning(f"exact 3-coloring of the {current.vertex_count}-vertex residual gave up: {e}")
        report.exact_budget_exceeded = True
        residual_coloring = greedy_coloring(current)
    else:
        if residual_coloring is None:
            logger.warning(
                f"residual of {current.vertex_count} vertices is not 3-colorable, input breaks the 3-colorable promise; "
                f"finishing greedily"
            )
            report.promise_violation = True
            residual_coloring = greedy_coloring(current)
    for v, c in enumerate(residual_coloring.assignment):
        colors[id_map[v]] = next_color + c
    report.exact_stage_colors = residual_coloring.colors_used if current.vertex_count else 0

    if any(c < 0 for c in colors):
        raise AssertionError("peeling left a vertex uncolored")
    coloring = Coloring.of(colors)
    report.colors_used = coloring.colors_used
    report.valid = verify_coloring(g, coloring)
    report.peak_rss_mb = current_rss_mb()
    report.wall_ms = elapsed_ms(start)
    if report.valid and not report.promise_violation:
        logger.info(f"✅ colored n={n} with {report.colors_used} colors in {report.rounds} rounds ({report.wall_ms} ms)")
    return coloring, report
