# === Tricolor - Exact Oracles ===
#
# Brute-force ground truth. Branch-and-bound maximum independent set and
# backtracking 3-coloring are the production oracles (the coloring one is the
# final stage of the peeling pipeline); the bitmask / product enumerators exist
# only to cross-check them on small graphs.
from __future__ import annotations

import itertools
import sys
from typing import Optional

from .tricolor_errors import BudgetExceededError
from .tricolor_graph import Coloring, Graph, VertexSet
from .tricolor_log import get_logger

logger = get_logger(__name__)

DEFAULT_MIS_BUDGET = 5_000_000
DEFAULT_COLOR_BUDGET = 2_000_000
BITMASK_LIMIT = 20
BRUTEFORCE_COLOR_LIMIT = 12


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _clique_cover_size(cand, masks):
    """Greedy partition of `cand` into cliques; an independent set meets each clique at most once."""
    count = 0
    while cand:
        low = cand & -cand
        cand ^= low
        clique_cand = cand & masks[low.bit_length() - 1]
        while clique_cand:
            w_low = clique_cand & -clique_cand
            cand ^= w_low
            clique_cand = (clique_cand ^ w_low) & masks[w_low.bit_length() - 1]
        count += 1
    return count


# --- Maximum Independent Set ---
def exact_max_independent_set(g: Graph, budget: int = DEFAULT_MIS_BUDGET) -> VertexSet:
    """
    Maximum independent set by branch and bound with clique-cover bounds.

    Branching always splits on the lowest candidate id, include-branch first, so
    sets are met in lexicographic order of their sorted member lists; keeping
    only strict improvements therefore returns the lexicographically smallest
    maximum set.
    """
    if budget <= 0:
        raise ValueError(f"budget must be positive, got {budget}")
    masks = g.neighbor_masks
    best = [()]
    nodes = [0]

    def expand(chosen, cand):
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExceededError(
                "maximum independent set search exhausted its budget",
                best=VertexSet.of(best[0], independent=True),
                nodes_expanded=nodes[0] - 1,
            )
        # Candidates with no candidate neighbor belong to every maximum extension.
        free = 0
        for v in _bits(cand):
            if not masks[v] & cand:
                free |= 1 << v
        if free:
            chosen = chosen + tuple(_bits(free))
            cand &= ~free
        if not cand:
            if len(chosen) > len(best[0]):
                best[0] = tuple(sorted(chosen))
            return
        if len(chosen) + _clique_cover_size(cand, masks) <= len(best[0]):
            return
        low = cand & -cand
        v = low.bit_length() - 1
        expand(chosen + (v,), cand & ~low & ~masks[v])
        expand(chosen, cand & ~low)

    expand((), (1 << g.vertex_count) - 1)
    logger.debug(f"MIS n={g.vertex_count}: alpha={len(best[0])} after {nodes[0]} nodes")
    return VertexSet.of(best[0], independent=True)


def bitmask_max_independent_set(g: Graph) -> VertexSet:
    """Exhaustive subset enumeration, n <= 20. Same tie-break as the branch-and-bound oracle."""
    n = g.vertex_count
    if n > BITMASK_LIMIT:
        raise ValueError(f"bitmask enumeration is limited to n <= {BITMASK_LIMIT}, got {n}")
    masks = g.neighbor_masks
    best_size, best_members = 0, ()
    for subset in range(1 << n):
        size = bin(subset).count("1")
        if size < best_size:
            continue
        if any(masks[v] & subset for v in _bits(subset)):
            continue
        members = tuple(_bits(subset))
        if size > best_size or members < best_members:
            best_size, best_members = size, members
    return VertexSet.of(best_members, independent=True)


# --- Exact 3-Coloring ---
def exact_3color(g: Graph, budget: int = DEFAULT_COLOR_BUDGET) -> Optional[Coloring]:
    """
    Backtracking 3-coloring in saturation order (most distinct neighbor colors
    first, then degree, then smaller id). The first vertex gets color 0 and a
    vertex may only open the next unused color, which removes palette symmetry.
    Returns None when no 3-coloring exists.
    """
    if budget <= 0:
        raise ValueError(f"budget must be positive, got {budget}")
    n = g.vertex_count
    if n == 0:
        return Coloring((), 3)
    adjacency = g.adjacency
    degrees = g.degrees
    colors = [-1] * n
    # blocked[v][c] counts colored neighbors of v holding color c
    blocked = [[0, 0, 0] for _ in range(n)]
    nodes = [0]

    def pick_vertex():
        best_v, best_key = -1, None
        for v in range(n):
            if colors[v] != -1:
                continue
            saturation = sum(1 for c in range(3) if blocked[v][c])
            key = (-saturation, -degrees[v], v)
            if best_key is None or key < best_key:
                best_v, best_key = v, key
        return best_v

    def assign(v, c):
        colors[v] = c
        wiped = False
        for w in adjacency[v]:
            blocked[w][c] += 1
            if colors[w] == -1 and all(blocked[w]):
                wiped = True
        return wiped

    def unassign(v, c):
        colors[v] = -1
        for w in adjacency[v]:
            blocked[w][c] -= 1

    def search(colored, used):
        if colored == n:
            return True
        v = pick_vertex()
        for c in range(min(used + 1, 3)):
            if blocked[v][c]:
                continue
            nodes[0] += 1
            if nodes[0] > budget:
                raise BudgetExceededError("exact 3-coloring exhausted its budget", nodes_expanded=nodes[0] - 1)
            wiped = assign(v, c)
            if not wiped and search(colored + 1, max(used, c + 1)):
                return True
            unassign(v, c)
        return False

    if sys.getrecursionlimit() < n + 200:
        sys.setrecursionlimit(n + 200)
    found = search(0, 0)
    logger.debug(f"3-color n={n}: {'found' if found else 'none'} after {nodes[0]} nodes")
    if not found:
        return None
    return Coloring(tuple(colors), 3)


def three_colorable_bruteforce(g: Graph) -> bool:
    """Enumerates all 3^(n-1) assignments with vertex 0 fixed; n <= 12."""
    n = g.vertex_count
    if n > BRUTEFORCE_COLOR_LIMIT:
        raise ValueError(f"brute-force 3-coloring is limited to n <= {BRUTEFORCE_COLOR_LIMIT}, got {n}")
    if n == 0:
        return True
    edges = list(g.edges())
    for tail in itertools.product(range(3), repeat=n - 1):
        colors = (0,) + tail
        if all(colors[u] != colors[v] for u, v in edges):
            return True
    return False
