# === Tricolor - Graph Core ===
#
# Graph representation, planted instance generation, certificate checks and
# DIMACS / JSON file I/O. Vertex ids are dense and 0-based everywhere inside
# the package; DIMACS ids are shifted by one on the way in and out.
from __future__ import annotations

import io
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
import orjson

from .tricolor_errors import DimacsParseError
from .tricolor_log import get_logger
from .tricolor_utils import make_rng

logger = get_logger(__name__)


# --- Domain Types ---
@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph with sorted adjacency lists."""
    vertex_count: int
    adjacency: Tuple[Tuple[int, ...], ...]
    edge_count: int

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
        if vertex_count < 0:
            raise ValueError(f"vertex_count must be nonnegative, got {vertex_count}")
        neighbor_sets = [set() for _ in range(vertex_count)]
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"edge ({u}, {v}) out of range for {vertex_count} vertices")
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            neighbor_sets[u].add(v)
            neighbor_sets[v].add(u)
        adjacency = tuple(tuple(sorted(s)) for s in neighbor_sets)
        edge_count = sum(len(a) for a in adjacency) // 2
        return cls(vertex_count, adjacency, edge_count)

    @classmethod
    def empty(cls, vertex_count: int) -> "Graph":
        return cls(vertex_count, tuple(() for _ in range(vertex_count)), 0)

    @cached_property
    def neighbor_sets(self) -> Tuple[frozenset, ...]:
        return tuple(frozenset(a) for a in self.adjacency)

    @cached_property
    def neighbor_masks(self) -> Tuple[int, ...]:
        masks = []
        for nbrs in self.adjacency:
            mask = 0
            for v in nbrs:
                mask |= 1 << v
            masks.append(mask)
        return tuple(masks)

    @cached_property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    @cached_property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbor_sets[u]

    def edges(self):
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    yield u, v

    def check_invariants(self) -> None:
        """Full scan of the symmetry / no-loop / no-duplicate invariants."""
        total = 0
        for u, nbrs in enumerate(self.adjacency):
            if list(nbrs) != sorted(set(nbrs)):
                raise AssertionError(f"adjacency of {u} is not sorted and duplicate-free")
            for v in nbrs:
                if v == u:
                    raise AssertionError(f"self-loop on {u}")
                if not 0 <= v < self.vertex_count:
                    raise AssertionError(f"neighbor {v} of {u} out of range")
                if u not in self.neighbor_sets[v]:
                    raise AssertionError(f"edge ({u}, {v}) is not symmetric")
            total += len(nbrs)
        if total != 2 * self.edge_count:
            raise AssertionError(f"edge_count {self.edge_count} disagrees with adjacency ({total} / 2)")


@dataclass(frozen=True)
class VertexSet:
    members: Tuple[int, ...]
    independent: bool = False

    @classmethod
    def of(cls, members: Iterable[int], independent: bool = False) -> "VertexSet":
        return cls(tuple(sorted(set(int(m) for m in members))), independent)

    @property
    def size(self) -> int:
        return len(self.members)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, v):
        return v in self.as_frozenset

    @cached_property
    def as_frozenset(self) -> frozenset:
        return frozenset(self.members)

    def sort_key(self):
        """Total order used by every max-reduction: larger first, then lexicographically smaller."""
        return (-len(self.members), self.members)


def best_of(candidates: Iterable[VertexSet]) -> Optional[VertexSet]:
    best = None
    for candidate in candidates:
        if best is None or candidate.sort_key() < best.sort_key():
            best = candidate
    return best


@dataclass(frozen=True)
class Coloring:
    assignment: Tuple[int, ...]
    palette_size: int

    def __post_init__(self):
        if self.palette_size < 1:
            raise ValueError(f"palette_size must be positive, got {self.palette_size}")
        for v, c in enumerate(self.assignment):
            if not 0 <= c < self.palette_size:
                raise ValueError(f"vertex {v} has color {c} outside [0, {self.palette_size})")

    @classmethod
    def of(cls, assignment: Sequence[int], palette_size: Optional[int] = None) -> "Coloring":
        assignment = tuple(int(c) for c in assignment)
        if palette_size is None:
            palette_size = max(assignment, default=-1) + 1 or 1
        return cls(assignment, palette_size)

    @property
    def colors_used(self) -> int:
        return len(set(self.assignment))

    def classes(self):
        grouped = {}
        for v, c in enumerate(self.assignment):
            grouped.setdefault(c, []).append(v)
        return {c: tuple(vs) for c, vs in sorted(grouped.items())}


@dataclass(frozen=True)
class PlantedInstance:
    graph: Graph
    hidden_coloring: Coloring
    target_degree: Optional[int] = None
    seed: Optional[int] = field(default=None, compare=False)


# --- Certificates ---
def verify_coloring(g: Graph, c: Coloring) -> bool:
    if len(c.assignment) != g.vertex_count:
        raise ValueError(f"coloring has {len(c.assignment)} entries for {g.vertex_count} vertices")
    colors = c.assignment
    for u, v in g.edges():
        if colors[u] == colors[v]:
            return False
    return True


def _check_ids(g: Graph, ids: Iterable[int]):
    for v in ids:
        if not 0 <= v < g.vertex_count:
            raise ValueError(f"vertex id {v} out of range for {g.vertex_count} vertices")


def verify_independent_set(g: Graph, s) -> bool:
    members = s.members if isinstance(s, VertexSet) else tuple(s)
    _check_ids(g, members)
    member_set = set(members)
    neighbor_sets = g.neighbor_sets
    for v in members:
        if not neighbor_sets[v].isdisjoint(member_set):
            return False
    return True


# --- Subgraphs ---
def induced_subgraph(g: Graph, keep: Sequence[int]) -> Tuple[Graph, Tuple[int, ...]]:
    """Induced subgraph on `keep` (sorted), plus the new-id -> old-id mapping."""
    keep = tuple(sorted(keep))
    new_id = {old: i for i, old in enumerate(keep)}
    adjacency = []
    total = 0
    for old in keep:
        row = tuple(new_id[w] for w in g.adjacency[old] if w in new_id)
        adjacency.append(row)
        total += len(row)
    return Graph(len(keep), tuple(adjacency), total // 2), keep


def delete_vertices(g: Graph, s) -> Tuple[Graph, Tuple[int, ...]]:
    removed = set(s.members if isinstance(s, VertexSet) else s)
    _check_ids(g, removed)
    if not removed:
        return g, tuple(range(g.vertex_count))
    return induced_subgraph(g, [v for v in range(g.vertex_count) if v not in removed])


def closed_neighborhood(g: Graph, v: int) -> Tuple[int, ...]:
    return tuple(sorted(g.adjacency[v] + (v,)))


# --- Instance Generation ---
def gen_planted_3col(n: int, target_degree: int, seed: int) -> PlantedInstance:
    """
    Random graph around a hidden balanced 3-coloring.

    Each cross-class pair becomes an edge with probability
    p = min(1, target_degree / (2n/3)). Vertices left above 2 * target_degree
    afterwards shed edges to their highest-degree neighbors (ties: smaller id)
    until they fit, which never touches the hidden coloring.
    """
    if n < 3:
        raise ValueError(f"planted instances need n >= 3, got {n}")
    if target_degree < 1:
        raise ValueError(f"target_degree must be >= 1, got {target_degree}")

    rng = make_rng(seed)
    order = rng.permutation(n)
    colors = [0] * n
    for position, v in enumerate(order):
        colors[int(v)] = position % 3

    p = min(1.0, target_degree / (2.0 * n / 3.0))
    neighbor_sets = [set() for _ in range(n)]
    color_array = np.asarray(colors)
    for u in range(n - 1):
        draws = rng.random(n - u - 1)
        candidates = np.arange(u + 1, n)
        chosen = candidates[(draws < p) & (color_array[u + 1:] != colors[u])]
        for v in chosen.tolist():
            neighbor_sets[u].add(v)
            neighbor_sets[v].add(u)

    cap = 2 * target_degree
    pruned = 0
    for v in range(n):
        while len(neighbor_sets[v]) > cap:
            w = max(neighbor_sets[v], key=lambda x: (len(neighbor_sets[x]), -x))
            neighbor_sets[v].discard(w)
            neighbor_sets[w].discard(v)
            pruned += 1
    if pruned:
        logger.debug(f"planted n={n} d={target_degree} seed={seed}: pruned {pruned} edges over the degree cap")

    adjacency = tuple(tuple(sorted(s)) for s in neighbor_sets)
    graph = Graph(n, adjacency, sum(len(a) for a in adjacency) // 2)
    return PlantedInstance(graph, Coloring(tuple(colors), 3), target_degree, seed)


# --- DIMACS I/O ---
def _iter_lines(text):
    if isinstance(text, str):
        return io.StringIO(text)
    return text


def load_dimacs(text) -> Graph:
    """Parses DIMACS '.col' text (a string or a text stream)."""
    vertex_count = None
    edges = []
    for line_number, raw in enumerate(_iter_lines(text), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "p":
            if vertex_count is not None:
                raise DimacsParseError(line_number, "duplicate 'p' header")
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise DimacsParseError(line_number, f"malformed header {line!r}, expected 'p edge <n> <m>'")
            try:
                vertex_count = int(parts[2])
                int(parts[3])
            except ValueError:
                raise DimacsParseError(line_number, f"non-integer counts in header {line!r}")
            if vertex_count < 0:
                raise DimacsParseError(line_number, f"negative vertex count {vertex_count}")
        elif kind == "e":
            if vertex_count is None:
                raise DimacsParseError(line_number, "edge line before 'p' header")
            if len(parts) != 3:
                raise DimacsParseError(line_number, f"malformed edge line {line!r}")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise DimacsParseError(line_number, f"non-integer vertex id in {line!r}")
            for x in (u, v):
                if not 1 <= x <= vertex_count:
                    raise DimacsParseError(line_number, f"vertex id {x} out of range 1..{vertex_count}")
            if u == v:
                raise DimacsParseError(line_number, f"self-loop on vertex {u}")
            edges.append((u - 1, v - 1))
        else:
            raise DimacsParseError(line_number, f"unknown line type {kind!r}")
    if vertex_count is None:
        raise DimacsParseError(0, "missing 'p edge <n> <m>' header")
    return Graph.from_edges(vertex_count, edges)


def write_dimacs(g: Graph, comments: Sequence[str] = ()) -> str:
    lines = [f"c {comment}" for comment in comments]
    lines.append(f"p edge {g.vertex_count} {g.edge_count}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def read_dimacs_file(path) -> Graph:
    with open(path, "r", encoding="utf-8") as f:
        return load_dimacs(f)


def write_dimacs_file(path, g: Graph, comments: Sequence[str] = ()) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(write_dimacs(g, comments))


# --- Coloring JSON ---
def coloring_to_json(c: Coloring) -> bytes:
    """Hidden-coloring form: {"n": int, "colors": [...]}."""
    return orjson.dumps({"n": len(c.assignment), "colors": list(c.assignment)})


def coloring_from_json(data) -> Coloring:
    payload = orjson.loads(data) if isinstance(data, (bytes, str)) else data
    colors = payload["colors"]
    if "n" in payload and payload["n"] != len(colors):
        raise ValueError(f"coloring JSON declares n={payload['n']} but lists {len(colors)} colors")
    return Coloring.of(colors, payload.get("palette"))


# --- networkx Adapters ---
def to_networkx(g: Graph) -> nx.Graph:
    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.vertex_count))
    nxg.add_edges_from(g.edges())
    return nxg


def from_networkx(nxg: nx.Graph) -> Graph:
    """Relabels nodes to 0..n-1 in sorted-label order when labels are sortable."""
    nodes = list(nxg.nodes())
    try:
        nodes = sorted(nodes)
    except TypeError:
        pass
    index = {node: i for i, node in enumerate(nodes)}
    return Graph.from_edges(len(nodes), ((index[u], index[v]) for u, v in nxg.edges() if u != v))
