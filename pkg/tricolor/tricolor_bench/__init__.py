# === Tricolor - Bench Submodule ===

# Expose the suite runner and the worker pool to the CLI.
from .logic import SUITE_NAMES, bench_suite
from .worker import CellRunner

__all__ = ["SUITE_NAMES", "bench_suite", "CellRunner"]
