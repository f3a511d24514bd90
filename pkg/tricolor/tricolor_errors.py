# === Tricolor - Error Types ===


class DimacsParseError(ValueError):
    """Raised by load_dimacs; always names the offending line."""

    def __init__(self, line_number, message):
        self.line_number = line_number
        super().__init__(f"DIMACS line {line_number}: {message}")


class BudgetExceededError(RuntimeError):
    """
    A counted search ran out of node expansions (reason='budget') or hit a
    cooperative deadline (reason='deadline').

    `best` holds the best-so-far VertexSet when the search produces one; it is
    always a valid independent set. Exact 3-coloring has no partial answer and
    leaves it as None.
    """

    def __init__(self, message, best=None, best_size=0, nodes_expanded=0, reason="budget", stats=None):
        self.best = best
        self.best_size = best_size if best is None else len(best)
        self.nodes_expanded = nodes_expanded
        self.reason = reason
        self.stats = stats
        super().__init__(f"{message} (best so far: {self.best_size}, nodes expanded: {nodes_expanded})")
