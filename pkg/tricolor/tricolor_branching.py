# === Tricolor - Degree-Reduction Branching ===
#
# Reduces an arbitrary graph to leaves of maximum degree <= d by branching on a
# batch B of the highest-degree vertices: either take one v in B (delete N[v])
# or discard all of B. A leaf is handed to the base solver; the answer is the
# best "taken vertices + leaf set" over all leaves.
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Optional

from .tricolor_errors import BudgetExceededError
from .tricolor_graph import Graph, VertexSet, delete_vertices
from .tricolor_log import get_logger

logger = get_logger(__name__)

DEFAULT_BRANCH_BUDGET = 20_000


# --- Parameters ---
@dataclass(frozen=True)
class ApproxParams:
    r: float
    d: int
    r_prime: float
    t: float
    batch: int
    beta: float = 1.0

    def __post_init__(self):
        if self.d < 2 * self.r:
            raise ValueError(f"degree threshold d={self.d} must be >= 2r = {2 * self.r}")
        if self.r_prime < 1:
            raise ValueError(f"r_prime must be >= 1, got {self.r_prime}")
        if self.batch != self.d:
            raise ValueError(f"batch must equal d, got batch={self.batch}, d={self.d}")

    def to_dict(self):
        return asdict(self)


def derive_params(n: int, r: float, beta: float = 1.0) -> ApproxParams:
    """t = n/r^3, r' = max(1, r/ln(r^3)), d = max(ceil(2r)+1, ceil(beta r^3 / ln^1.5(r+e)))."""
    if r < 2:
        raise ValueError(f"r must be >= 2 (ratio 1 is exact solving), got {r}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    t = n / r ** 3
    r_prime = max(1.0, r / math.log(r ** 3))
    d = max(math.ceil(2 * r) + 1, math.ceil(beta * r ** 3 / math.log(r + math.e) ** 1.5))
    return ApproxParams(r=r, d=d, r_prime=r_prime, t=t, batch=d, beta=beta)


def ratio_from_epsilon(n: int, epsilon: float) -> float:
    """r = n^epsilon, the sub-exponential instantiation; epsilon in (0, 1/3)."""
    if not 0 < epsilon < 1 / 3:
        raise ValueError(f"epsilon must lie in (0, 1/3), got {epsilon}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return float(n) ** epsilon


def runtime_exponents(n: int, r: float) -> dict:
    """Analytic exponents of the running-time bounds; diagnostics only."""
    log_r = math.log(r)
    return {
        'independent_set': n * log_r ** 2.5 / r ** 3,
        'coloring': n * log_r ** 5.5 / r ** 3,
        'exact_stage': (n / r ** 3) * math.log(3),
    }


def leaf_count_bound(n: int, params: ApproxParams) -> float:
    return math.exp((n / params.d) * math.log(4 * params.d) + 2 * math.log(n + 2))


# --- Statistics ---
@dataclass
class BranchStats:
    leaves_explored: int = 0
    max_depth: int = 0
    takes_on_best_path: int = 0
    nodes_expanded: int = 0
    base_shortfalls: int = 0  # leaves where the base returned < n_leaf / (3 r')
    min_take_removal: Optional[int] = None

    def merge(self, other: "BranchStats") -> "BranchStats":
        removals = [x for x in (self.min_take_removal, other.min_take_removal) if x is not None]
        return BranchStats(
            leaves_explored=self.leaves_explored + other.leaves_explored,
            max_depth=max(self.max_depth, other.max_depth),
            takes_on_best_path=max(self.takes_on_best_path, other.takes_on_best_path),
            nodes_expanded=self.nodes_expanded + other.nodes_expanded,
            base_shortfalls=self.base_shortfalls + other.base_shortfalls,
            min_take_removal=min(removals) if removals else None,
        )

    def to_dict(self):
        return asdict(self)


@dataclass
class _Frame:
    graph: Graph
    id_map: tuple  # local id -> original id
    taken: tuple   # original ids taken on the way down
    depth: int = 0


# --- Search ---
def degree_reduce_is(
    g: Graph,
    params: ApproxParams,
    base: Callable[[Graph], VertexSet],
    budget: int = DEFAULT_BRANCH_BUDGET,
    should_stop: Optional[Callable[[], bool]] = None,
    pass_ids: bool = False,
):
    """
    Returns (VertexSet, BranchStats). Children are explored depth-first in
    batch order with the discard branch last. Raises BudgetExceededError
    (reason "budget", or "deadline" when should_stop() turns true) carrying
    the best set found so far. With pass_ids the base is called as
    base(leaf, ids) where ids maps leaf vertices to vertices of g.
    """
    if budget <= 0:
        raise ValueError(f"budget must be positive, got {budget}")
    stats = BranchStats()
    best = None
    best_takes = 0
    stack = [_Frame(g, tuple(range(g.vertex_count)), ())]

    def stop(reason, message):
        result = best if best is not None else VertexSet((), True)
        stats.takes_on_best_path = best_takes
        raise BudgetExceededError(
            message, best=result, nodes_expanded=stats.nodes_expanded, reason=reason, stats=stats,
        )

    while stack:
        frame = stack.pop()
        stats.nodes_expanded += 1
        if stats.nodes_expanded > budget:
            stats.nodes_expanded -= 1
            stop("budget", f"degree-reduction search exhausted its budget of {budget} nodes")
        if should_stop is not None and should_stop():
            stop("deadline", "degree-reduction search hit its deadline")
        stats.max_depth = max(stats.max_depth, frame.depth)

        current = frame.graph
        degrees = current.degrees
        heavy = [v for v in range(current.vertex_count) if degrees[v] > params.d]
        if not heavy:
            stats.leaves_explored += 1
            leaf_set = base(current, frame.id_map) if pass_ids else base(current)
            if leaf_set.size < current.vertex_count / (3 * params.r_prime):
                stats.base_shortfalls += 1
            candidate = VertexSet.of(frame.taken + tuple(frame.id_map[v] for v in leaf_set), independent=True)
            if best is None or candidate.sort_key() < best.sort_key():
                best, best_takes = candidate, len(frame.taken)
            continue

        heavy.sort(key=lambda v: (-degrees[v], v))
        batch = heavy[:min(len(heavy), params.batch)]
        children = []
        for v in batch:
            closed = (v,) + current.adjacency[v]
            removal = len(closed)
            if stats.min_take_removal is None or removal < stats.min_take_removal:
                stats.min_take_removal = removal
            child, mapping = delete_vertices(current, closed)
            children.append(_Frame(
                child, tuple(frame.id_map[x] for x in mapping), frame.taken + (frame.id_map[v],), frame.depth + 1,
            ))
        child, mapping = delete_vertices(current, batch)
        children.append(_Frame(child, tuple(frame.id_map[x] for x in mapping), frame.taken, frame.depth + 1))
        stack.extend(reversed(children))

    stats.takes_on_best_path = best_takes
    logger.debug(
        f"degree reduction n={g.vertex_count} d={params.d}: {stats.leaves_explored} leaves, "
        f"depth {stats.max_depth}, best {best.size}"
    )
    return best, stats
