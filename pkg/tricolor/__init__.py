# === Tricolor - Package Initializer ===
#
# Approximate coloring of 3-colorable graphs: peel approximate independent
# sets (degree-reduction branching over vector 3-coloring cap rounding) as
# color classes, then 3-color the small residual exactly.
#
# Public API is re-exported here; the CLI lives in tricolor_cli and runs with
# `python -m tricolor`.

from .tricolor_branching import (
    ApproxParams,
    BranchStats,
    degree_reduce_is,
    derive_params,
    leaf_count_bound,
    ratio_from_epsilon,
    runtime_exponents,
)
from .tricolor_coloring import PipelineConfig, RunReport, approx_color, greedy_coloring, peel_round
from .tricolor_errors import BudgetExceededError, DimacsParseError
from .tricolor_exact import (
    bitmask_max_independent_set,
    exact_3color,
    exact_max_independent_set,
    three_colorable_bruteforce,
)
from .tricolor_graph import (
    Coloring,
    Graph,
    PlantedInstance,
    VertexSet,
    coloring_from_json,
    coloring_to_json,
    delete_vertices,
    from_networkx,
    gen_planted_3col,
    induced_subgraph,
    load_dimacs,
    read_dimacs_file,
    to_networkx,
    verify_coloring,
    verify_independent_set,
    write_dimacs,
    write_dimacs_file,
)
from .tricolor_is import IsConfig, IsReport, approx_independent_set, markov_failure_bound
from .tricolor_rounding import (
    RoundingConfig,
    bounded_degree_is,
    default_threshold_grid,
    greedy_min_degree_is,
    hyperplane_round,
)
from .tricolor_run_store import RunStore
from .tricolor_vector import (
    SolverConfig,
    VectorEmbedding,
    embedding_residual,
    planted_embedding,
    solve_vector_3coloring,
)

__all__ = [
    # graph core
    "Graph", "VertexSet", "Coloring", "PlantedInstance",
    "verify_coloring", "verify_independent_set", "induced_subgraph", "delete_vertices",
    "gen_planted_3col", "load_dimacs", "write_dimacs", "read_dimacs_file", "write_dimacs_file",
    "coloring_to_json", "coloring_from_json", "to_networkx", "from_networkx",
    # exact oracles
    "exact_max_independent_set", "exact_3color", "bitmask_max_independent_set", "three_colorable_bruteforce",
    # vector coloring and rounding
    "SolverConfig", "VectorEmbedding", "solve_vector_3coloring", "embedding_residual", "planted_embedding",
    "RoundingConfig", "hyperplane_round", "bounded_degree_is", "greedy_min_degree_is", "default_threshold_grid",
    # branching and the pipeline
    "ApproxParams", "BranchStats", "derive_params", "degree_reduce_is", "leaf_count_bound",
    "ratio_from_epsilon", "runtime_exponents",
    "IsConfig", "IsReport", "approx_independent_set", "markov_failure_bound",
    "PipelineConfig", "RunReport", "approx_color", "peel_round", "greedy_coloring",
    # ambient
    "BudgetExceededError", "DimacsParseError", "RunStore",
]
