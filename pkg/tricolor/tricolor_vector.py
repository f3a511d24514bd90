# === Tricolor - Vector 3-Coloring ===
#
# Low-rank penalty solver for the vector 3-coloring relaxation: one unit vector
# per vertex, every edge asking for <v_u, v_v> <= -1/2. The solver descends the
# squared hinge sum_edges max(0, <v_u, v_v> + 1/2 + margin)^2 on the product of
# spheres: tangent-projected gradient steps with backtracking while far from
# feasible, damped Gauss-Newton polishing of the near-active edges once the
# residual is small. A start whose objective goes flat is abandoned.
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import orjson

from .tricolor_graph import Coloring, Graph
from .tricolor_log import get_logger
from .tricolor_utils import derive_seed, make_rng

logger = get_logger(__name__)

STATUS_REACHED = "tolerance-reached"
STATUS_NOT_REACHED = "tolerance-not-reached"
AUTO_RANK_CAP = 25
ARMIJO_C = 1e-4
STALL_DECREASE = 1e-2

# Gauss-Newton polishing
POLISH_BAND = 4.0
POLISH_BAND_CAP = 0.05
POLISH_ATTEMPTS = 4
POLISH_COOLDOWN = 20
POLISH_DAMPING = 1e-2
MIN_DAMPING = 1e-10
MAX_DAMPING = 1e8
CG_MAX_ITERATIONS = 60


@dataclass(frozen=True)
class SolverConfig:
    epsilon: float = 1e-3
    max_iterations: int = 20000
    rank: Optional[int] = None  # None -> max(3, min(n, 25))
    initial_step: float = 0.5
    step_growth: float = 1.5
    step_shrink: float = 0.5
    min_step: float = 1e-10
    margin: float = 0.0
    restarts: int = 5
    polish_below: float = 0.2
    stall_window: int = 500
    seed: int = 0

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be positive, got {self.max_iterations}")
        if self.rank is not None and self.rank < 3:
            raise ValueError(f"rank must be >= 3, got {self.rank}")
        if self.margin < 0:
            raise ValueError(f"margin must be >= 0, got {self.margin}")
        if not 0 < self.step_shrink < 1 or self.step_growth < 1:
            raise ValueError("step_shrink must lie in (0, 1) and step_growth must be >= 1")
        if self.restarts < 0:
            raise ValueError(f"restarts must be >= 0, got {self.restarts}")
        if self.polish_below < 0:
            raise ValueError(f"polish_below must be >= 0, got {self.polish_below}")
        if self.stall_window < 0:
            raise ValueError(f"stall_window must be >= 0 (0 disables), got {self.stall_window}")

    @classmethod
    def from_settings(cls, settings, seed=0):
        rank = settings.get('rank', 0)
        return cls(
            epsilon=settings.get('epsilon', 1e-3),
            max_iterations=settings.get('max_iterations', 20000),
            rank=rank if rank and rank > 0 else None,
            initial_step=settings.get('initial_step', 0.5),
            step_growth=settings.get('step_growth', 1.5),
            step_shrink=settings.get('step_shrink', 0.5),
            min_step=settings.get('min_step', 1e-10),
            margin=settings.get('margin', 0.0),
            restarts=settings.get('restarts', 5),
            polish_below=settings.get('polish_below', 0.2),
            stall_window=settings.get('stall_window', 500),
            seed=seed,
        )

    def resolved_rank(self, n):
        if self.rank is not None:
            return self.rank
        return max(3, min(n, AUTO_RANK_CAP))


@dataclass(frozen=True, eq=False)
class VectorEmbedding:
    dimension: int
    vectors: np.ndarray  # shape (n, dimension), unit rows
    residual: float
    status: str = STATUS_REACHED
    iterations: int = 0
    restarts_used: int = 0
    penalty_history: tuple = field(default=(), repr=False)

    @property
    def reached(self):
        return self.status == STATUS_REACHED

    def to_json(self) -> bytes:
        return orjson.dumps({"k": self.dimension, "vectors": self.vectors}, option=orjson.OPT_SERIALIZE_NUMPY)

    @classmethod
    def from_json(cls, data, g: Optional[Graph] = None) -> "VectorEmbedding":
        payload = orjson.loads(data)
        vectors = np.asarray(payload["vectors"], dtype=float).reshape(-1, int(payload["k"]))
        residual = embedding_residual(g, vectors) if g is not None else float("nan")
        return cls(int(payload["k"]), vectors, residual)


# --- Residual ---
def _edge_arrays(g: Graph):
    edges = np.fromiter((x for e in g.edges() for x in e), dtype=np.int64, count=2 * g.edge_count)
    edges = edges.reshape(-1, 2)
    return edges[:, 0], edges[:, 1]


def embedding_residual(g: Graph, emb) -> float:
    """max over edges of max(0, <v_u, v_v> + 1/2); 0 for edgeless graphs."""
    vectors = emb.vectors if isinstance(emb, VectorEmbedding) else emb
    if isinstance(vectors, np.ndarray):
        if vectors.ndim != 2:
            raise ValueError(f"embedding must be a 2-d array, got shape {vectors.shape}")
    else:
        lengths = {len(row) for row in vectors}
        if len(lengths) > 1:
            raise ValueError(f"embedding vectors have mixed dimensions {sorted(lengths)}")
        vectors = np.asarray(vectors, dtype=float)
    if len(vectors) != g.vertex_count:
        raise ValueError(f"embedding has {len(vectors)} vectors for {g.vertex_count} vertices")
    if g.edge_count == 0:
        return 0.0
    eu, ev = _edge_arrays(g)
    inner = np.einsum("ij,ij->i", vectors[eu], vectors[ev])
    return float(max(0.0, np.max(inner) + 0.5))


def planted_embedding(coloring: Coloring, k: int = 3) -> VectorEmbedding:
    """Feasibility witness: color class j -> j-th of three planar unit vectors at 120 degrees."""
    if k < 2:
        raise ValueError(f"the 120-degree witness needs k >= 2, got {k}")
    half_root3 = math.sqrt(3.0) / 2.0
    anchors = np.zeros((3, k))
    anchors[0, 0] = 1.0
    anchors[1, :2] = (-0.5, half_root3)
    anchors[2, :2] = (-0.5, -half_root3)
    vectors = anchors[np.asarray(coloring.assignment, dtype=np.int64)] if coloring.assignment else np.zeros((0, k))
    return VectorEmbedding(k, vectors, 0.0)


# --- Solver ---
def _normalize_rows(x):
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    return x / norms


def _project(x, v):
    """Tangent space of the product of unit spheres at x."""
    return v - np.einsum("ij,ij->i", v, x)[:, None] * x


class _PenaltyProblem:
    def __init__(self, g: Graph, margin: float):
        self.n = g.vertex_count
        self.eu, self.ev = _edge_arrays(g)
        self.shift = 0.5 + margin
        # endpoint-sorted incidence for reduceat scatters
        m = len(self.eu)
        ends = np.concatenate([self.eu, self.ev])
        order = np.argsort(ends, kind="stable")
        self._others = np.concatenate([self.ev, self.eu])[order]
        self._edge_of = np.concatenate([np.arange(m), np.arange(m)])[order]
        self._rows, self._starts = np.unique(ends[order], return_index=True)

    def hinge(self, x):
        inner = np.einsum("ij,ij->i", x[self.eu], x[self.ev])
        return np.maximum(0.0, inner + self.shift), inner

    def scatter(self, weights, x):
        """Row u gets sum over edges uv of weights[uv] * x[v]."""
        out = np.zeros_like(x)
        contributions = weights[self._edge_of][:, None] * x[self._others]
        out[self._rows] = np.add.reduceat(contributions, self._starts, axis=0)
        return out

    def directional(self, x, v):
        """Derivative of every edge inner product along v."""
        return np.einsum("ij,ij->i", v[self.eu], x[self.ev]) + np.einsum("ij,ij->i", x[self.eu], v[self.ev])

    def gradient(self, x, h):
        return _project(x, self.scatter(2.0 * h, x))


def _conjugate_gradient(apply, rhs, max_iterations=CG_MAX_ITERATIONS, tol=1e-12):
    solution = np.zeros_like(rhs)
    r = rhs.copy()
    p = r.copy()
    rs = float(np.sum(r * r))
    stop = tol * rs
    for _ in range(max_iterations):
        if rs <= stop:
            break
        ap = apply(p)
        curvature = float(np.sum(p * ap))
        if curvature <= 0.0:
            break
        alpha = rs / curvature
        solution += alpha * p
        r -= alpha * ap
        rs_next = float(np.sum(r * r))
        p = r + (rs_next / rs) * p
        rs = rs_next
    return solution


def _gradient_step(problem: _PenaltyProblem, x, h, value, step, cfg: SolverConfig):
    """Armijo backtracking along the Riemannian gradient. Returns (state or None, next step)."""
    grad = problem.gradient(x, h)
    grad_sq = float(np.sum(grad * grad))
    if grad_sq == 0.0:
        return None, step
    while step >= cfg.min_step:
        candidate = _normalize_rows(x - step * grad)
        cand_h, cand_inner = problem.hinge(candidate)
        cand_value = float(cand_h @ cand_h)
        if cand_value <= value - ARMIJO_C * step * grad_sq:
            return (candidate, cand_h, cand_inner, cand_value), step * cfg.step_growth
        step *= cfg.step_shrink
    return None, step


def _polish_step(problem: _PenaltyProblem, x, inner, value, damping):
    """
    Damped Gauss-Newton step pulling every near-active edge onto
    <v_u, v_v> = -(1/2 + margin). The linear system lives on the tangent space
    and is solved matrix-free by conjugate gradients. A step is kept only when
    the squared hinge strictly drops; each refusal multiplies the damping.
    Returns (state or None, next damping).
    """
    gap = inner + problem.shift
    band = min(max(POLISH_BAND * float(np.max(gap)), 1e-6), POLISH_BAND_CAP)
    mask = (gap > -band).astype(float)
    rhs = -_project(x, problem.scatter(gap * mask, x))

    for _ in range(POLISH_ATTEMPTS):
        def normal(v, mu=damping):
            return _project(x, problem.scatter(mask * problem.directional(x, v), x)) + mu * v

        delta = _conjugate_gradient(normal, rhs)
        candidate = _normalize_rows(x + delta)
        cand_h, cand_inner = problem.hinge(candidate)
        cand_value = float(cand_h @ cand_h)
        if cand_value < value:
            return (candidate, cand_h, cand_inner, cand_value), max(damping / 3.0, MIN_DAMPING)
        damping = min(damping * 8.0, MAX_DAMPING)
    return None, damping


def _descend(problem: _PenaltyProblem, x, cfg: SolverConfig):
    """
    One start. Gradient steps on the squared hinge until the residual drops
    below polish_below, then Gauss-Newton polishing with gradient steps as the
    fallback. Every accepted iteration strictly lowers the squared hinge.
    Returns (vectors, residual, iterations, accepted-objective history).
    """
    h, inner = problem.hinge(x)
    value = float(h @ h)
    history = [value]
    step = cfg.initial_step
    damping = POLISH_DAMPING
    polish_after = 0
    checkpoint = value
    residual = float(max(0.0, np.max(inner) + 0.5))
    iterations = 0
    while iterations < cfg.max_iterations and residual > cfg.epsilon:
        iterations += 1
        moved = None
        if residual <= cfg.polish_below and iterations >= polish_after:
            moved, damping = _polish_step(problem, x, inner, value, damping)
            if moved is None:
                polish_after = iterations + POLISH_COOLDOWN
        if moved is None:
            moved, step = _gradient_step(problem, x, h, value, step, cfg)
        if moved is None:
            logger.debug(f"line search stalled at objective {value:.3e} after {iterations} iterations")
            break
        x, h, inner, value = moved
        history.append(value)
        residual = float(max(0.0, np.max(inner) + 0.5))
        if cfg.stall_window and iterations % cfg.stall_window == 0:
            if value > (1.0 - STALL_DECREASE) * checkpoint:
                logger.debug(f"objective flat at {value:.3e} over {cfg.stall_window} iterations, giving up this start")
                break
            checkpoint = value
    return x, residual, iterations, history


def solve_vector_3coloring(g: Graph, cfg: SolverConfig = SolverConfig()) -> VectorEmbedding:
    """
    Approximate vector 3-coloring. Restarts (derived seeds) only while the
    tolerance is missed; the best embedding by residual is returned either way,
    flagged 'tolerance-not-reached' when no start got within epsilon.
    """
    n = g.vertex_count
    k = cfg.resolved_rank(n)
    if g.edge_count == 0:
        vectors = np.zeros((n, k))
        vectors[:, 0] = 1.0
        return VectorEmbedding(k, vectors, 0.0, STATUS_REACHED)

    problem = _PenaltyProblem(g, cfg.margin)
    best = None
    total_iterations = 0
    for attempt in range(cfg.restarts + 1):
        rng = make_rng(derive_seed(cfg.seed, attempt))
        start = _normalize_rows(rng.standard_normal((n, k)))
        x, residual, iterations, history = _descend(problem, start, cfg)
        total_iterations += iterations
        x = _normalize_rows(x)
        residual = embedding_residual(g, x)
        if best is None or residual < best[1]:
            best = (x, residual, attempt, history)
        if residual <= cfg.epsilon:
            break
        logger.debug(f"start {attempt}: residual {residual:.3e} > epsilon {cfg.epsilon:.1e}, restarting")

    x, residual, attempt, history = best
    status = STATUS_REACHED if residual <= cfg.epsilon else STATUS_NOT_REACHED
    if status == STATUS_NOT_REACHED:
        logger.warning(
            f"vector 3-coloring missed tolerance on n={n}, m={g.edge_count}: "
            f"best residual {residual:.3e} after {cfg.restarts + 1} starts"
        )
    return VectorEmbedding(k, x, residual, status, total_iterations, attempt, tuple(history))


def solve_from_start(g: Graph, start: np.ndarray, cfg: SolverConfig = SolverConfig()) -> VectorEmbedding:
    """Single warm-started descent (no restarts); used for sanity runs from a known embedding."""
    start = _normalize_rows(np.asarray(start, dtype=float))
    if len(start) != g.vertex_count:
        raise ValueError(f"start has {len(start)} rows for {g.vertex_count} vertices")
    if g.edge_count == 0:
        return VectorEmbedding(start.shape[1], start, 0.0, STATUS_REACHED)
    x, _, iterations, history = _descend(_PenaltyProblem(g, cfg.margin), start, cfg)
    x = _normalize_rows(x)
    residual = embedding_residual(g, x)
    status = STATUS_REACHED if residual <= cfg.epsilon else STATUS_NOT_REACHED
    return VectorEmbedding(start.shape[1], x, residual, status, iterations, 0, tuple(history))


def restrict_embedding(emb: VectorEmbedding, ids, g: Optional[Graph] = None) -> VectorEmbedding:
    """
    Rows `ids` of an embedding, a vector 3-coloring of the induced subgraph on
    those vertices. With the subgraph `g` the residual is measured on it;
    without, the parent residual is kept as an upper bound.
    """
    vectors = emb.vectors[np.asarray(ids, dtype=np.int64)] if len(ids) else np.zeros((0, emb.dimension))
    residual = embedding_residual(g, vectors) if g is not None else emb.residual
    return VectorEmbedding(emb.dimension, vectors, residual, emb.status, emb.iterations, emb.restarts_used)
