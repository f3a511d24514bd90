# === Tricolor - Bench Suites ===
#
# Three standing experiments, each a grid of independent cells:
#   rounding-scaling  cap-rounding size against n / (d^(1/3) sqrt(ln d))
#   leaf-count        explored leaves against leaf_count_bound
#   end-to-end        colors used against 3 ceil(r) + 4
# Every suite writes <out_dir>/<name>.csv (one row per cell) and
# <out_dir>/<name>-summary.json (per-setting medians and criterion verdicts).
import csv
import math
import os
import statistics
import time
from dataclasses import replace

from ..tricolor_branching import degree_reduce_is, derive_params, leaf_count_bound
from ..tricolor_coloring import PipelineConfig, approx_color
from ..tricolor_config import load_all_configs
from ..tricolor_errors import BudgetExceededError
from ..tricolor_graph import gen_planted_3col, verify_independent_set
from ..tricolor_log import get_logger
from ..tricolor_rounding import RoundingConfig, best_rounding, bounded_degree_is, greedy_min_degree_is
from ..tricolor_run_store import RunStore
from ..tricolor_utils import derive_seed, elapsed_ms, read_json, write_json
from ..tricolor_vector import SolverConfig, solve_vector_3coloring
from .worker import CELL_STATUS_OK, CellRunner

logger = get_logger(__name__)

SUITE_NAMES = ("rounding-scaling", "leaf-count", "end-to-end")

DEFAULT_KAPPA = 0.05
SCALING_BAND = 2.0


def _seeds(config, default_count):
    seeds = config.get("seeds", default_count)
    return list(range(seeds)) if isinstance(seeds, int) else [int(s) for s in seeds]


def _median(values):
    return statistics.median(values) if values else None


# --- rounding-scaling ---
def _rounding_cells(config):
    n_factor = int(config.get("n_factor", 50))
    for d in config.get("degrees", [8, 16, 32, 64, 128]):
        for seed in _seeds(config, 20):
            yield {"d": int(d), "n": n_factor * int(d), "seed": seed}


def _rounding_cell(cell, settings, config):
    start = time.perf_counter()
    d, n, seed = cell["d"], cell["n"], cell["seed"]
    instance = gen_planted_3col(n, d, seed)
    g = instance.graph
    solver = SolverConfig.from_settings(settings["solver"], derive_seed(seed, 1))
    emb = solve_vector_3coloring(g, solver)
    rounding = replace(
        RoundingConfig.from_settings(settings["rounding"], derive_seed(seed, 2)),
        trials=int(config.get("trials", 1)),
    )
    found = best_rounding(g, emb, rounding)
    reference = n / (d ** (1.0 / 3.0) * math.sqrt(math.log(d)))
    return {
        "m": g.edge_count,
        "max_degree": g.max_degree,
        "residual": emb.residual,
        "solver_status": emb.status,
        "size": found.size,
        "independent": verify_independent_set(g, found),
        "ratio": found.size / reference,
        "wall_ms": elapsed_ms(start),
    }


def _rounding_summary(rows, config):
    kappa = float(config.get("kappa", DEFAULT_KAPPA))
    medians = {}
    for d in sorted({row["d"] for row in rows}):
        ratios = [row["ratio"] for row in rows if row["d"] == d and row["status"] == CELL_STATUS_OK]
        medians[str(d)] = _median(ratios)
    values = [v for v in medians.values() if v is not None]
    spread = (max(values) / min(values)) if values and min(values) > 0 else None
    return {
        "median_ratio_by_degree": medians,
        "max_median_ratio": max(values, default=None),
        "min_median_ratio": min(values, default=None),
        "kappa": kappa,
        "criteria": {
            "all_independent": all(row.get("independent", False) for row in rows),
            "spread_within_band": spread is not None and spread <= SCALING_BAND,
            "bounded_below_by_kappa": bool(values) and min(values) >= kappa,
        },
    }


# --- leaf-count ---
def _leaf_cells(config):
    for n in config.get("sizes", [40, 80, 120, 160, 200]):
        for r in config.get("ratios", [3, 4]):
            for seed in _seeds(config, 5):
                yield {"n": int(n), "r": float(r), "seed": seed}


def _leaf_cell(cell, settings, config):
    start = time.perf_counter()
    n, r, seed = cell["n"], cell["r"], cell["seed"]
    params = derive_params(n, r, float(config.get("beta", settings["branching"]["beta"])))
    target = max(1, round(float(config.get("degree_factor", 0.6)) * params.d))
    g = gen_planted_3col(n, target, seed).graph
    if config.get("base", "greedy") == "rounding":
        rounding = RoundingConfig.from_settings(settings["rounding"], derive_seed(seed, 2))
        solver = SolverConfig.from_settings(settings["solver"], derive_seed(seed, 1))

        def base(leaf):
            return bounded_degree_is(leaf, params.r_prime, rounding, solver)
    else:
        base = greedy_min_degree_is
    budget = int(config.get("budget", 2_000_000))
    status = CELL_STATUS_OK
    try:
        found, stats = degree_reduce_is(g, params, base, budget)
    except BudgetExceededError as e:
        found, stats, status = e.best, e.stats, "budget"
    bound = leaf_count_bound(n, params)
    return {
        "d": params.d,
        "target_degree": target,
        "max_degree": g.max_degree,
        "size": found.size,
        "independent": verify_independent_set(g, found),
        "leaves": stats.leaves_explored,
        "bound": bound,
        "within_bound": stats.leaves_explored <= bound,
        "max_depth": stats.max_depth,
        "nodes": stats.nodes_expanded,
        "min_take_removal": stats.min_take_removal,
        "status": status,
        "wall_ms": elapsed_ms(start),
    }


def _leaf_summary(rows, config):
    completed = [row for row in rows if row["status"] == CELL_STATUS_OK]
    medians = {}
    for n in sorted({row["n"] for row in completed}):
        for r in sorted({row["r"] for row in completed}):
            leaves = [row["leaves"] for row in completed if row["n"] == n and row["r"] == r]
            if leaves:
                medians[f"n={n},r={r:g}"] = _median(leaves)
    return {
        "median_leaves": medians,
        "completed": len(completed),
        "cells": len(rows),
        "criteria": {
            "all_completed": len(completed) == len(rows),
            "leaves_within_bound": all(row.get("within_bound", False) for row in rows),
            "all_independent": all(row.get("independent", False) for row in rows),
            "take_removes_at_least_d_plus_2": all(
                row.get("min_take_removal") is None or row["min_take_removal"] >= row["d"] + 2 for row in completed
            ),
        },
    }


# --- end-to-end ---
def _end_to_end_cells(config):
    for n in config.get("sizes", [60]):
        for r in config.get("ratios", [2]):
            for degree in config.get("degrees", [8]):
                for seed in _seeds(config, 50):
                    yield {"n": int(n), "r": float(r), "degree": int(degree), "seed": seed}


def _pipeline_config(settings, config, seed):
    cfg = PipelineConfig.from_settings(settings, seed)
    is_config = cfg.is_config
    if "repetitions" in config:
        is_config = replace(is_config, repetitions=int(config["repetitions"]))
    if "beta" in config:
        is_config = replace(is_config, beta=float(config["beta"]))
    if "branch_budget" in config:
        is_config = replace(is_config, branch_budget=int(config["branch_budget"]))
    if "rounding_trials" in config:
        is_config = replace(is_config, rounding=replace(is_config.rounding, trials=int(config["rounding_trials"])))
    cfg = replace(cfg, is_config=is_config)
    if "per_round_calls" in config:
        cfg = replace(cfg, per_round_calls=int(config["per_round_calls"]))
    return cfg


def _end_to_end_cell(cell, settings, config):
    instance = gen_planted_3col(cell["n"], cell["degree"], cell["seed"])
    cfg = _pipeline_config(settings, config, cell["seed"])
    coloring, report = approx_color(instance.graph, cell["r"], cfg, seed=cell["seed"])
    return {
        "m": report.m,
        "colors_used": report.colors_used,
        "colors_bound": report.colors_bound,
        "within_bound": report.colors_used <= report.colors_bound,
        "rounds": report.rounds,
        "all_rounds_met": report.all_rounds_met,
        "valid": report.valid,
        "promise_violation": report.promise_violation,
        "wall_ms": report.wall_ms,
        "_report": report,
    }


def _end_to_end_summary(rows, config):
    completed = [row for row in rows if row["status"] == CELL_STATUS_OK]
    within = [row["within_bound"] for row in completed]
    conditional = [row["within_bound"] for row in completed if row["all_rounds_met"]]
    medians = {}
    for r in sorted({row["r"] for row in completed}):
        medians[f"r={r:g}"] = _median([row["colors_used"] for row in completed if row["r"] == r])
    within_rate = sum(within) / len(within) if within else 0.0
    return {
        "median_colors": medians,
        "within_bound_rate": within_rate,
        "criteria": {
            "all_completed": len(completed) == len(rows),
            "all_valid": bool(completed) and all(row["valid"] for row in completed),
            "within_bound_at_least_95_percent": within_rate >= 0.95,
            "within_bound_when_all_rounds_met": all(conditional),
        },
    }


SUITES = {
    "rounding-scaling": (_rounding_cells, _rounding_cell, _rounding_summary),
    "leaf-count": (_leaf_cells, _leaf_cell, _leaf_summary),
    "end-to-end": (_end_to_end_cells, _end_to_end_cell, _end_to_end_summary),
}


# --- Output ---
def _write_csv(path, rows):
    fieldnames = []
    for row in rows:
        for key in row:
            if key not in fieldnames:
                fieldnames.append(key)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)


def bench_suite(name, config_path, out_dir, settings=None):
    """
    Runs one suite over the grid in the JSON file `config_path` and returns the
    summary dict. Algorithm defaults come from config.ini unless `settings`
    (a load_all_configs() dict) is passed.
    """
    if name not in SUITES:
        raise ValueError(f"unknown bench suite {name!r}, expected one of {', '.join(SUITE_NAMES)}")
    config = read_json(config_path) if config_path else {}
    settings = settings or load_all_configs()
    make_cells, run_cell, summarize = SUITES[name]

    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, f"{name}.csv")
    summary_path = os.path.join(out_dir, f"{name}-summary.json")

    start = time.perf_counter()
    runner = CellRunner(int(config.get("threads", settings["bench"]["threads"])))
    cells = list(make_cells(config))
    logger.info(f"bench {name}: {len(cells)} cells on {runner.threads} threads")
    rows = runner.run(lambda cell: run_cell(cell, settings, config), cells)

    reports = [row.pop("_report", None) for row in rows]
    if config.get("db"):
        store = RunStore(config["db"])
        for report in reports:
            if report is not None:
                store.create_run(report, command=f"bench {name}")
        store.close()

    _write_csv(csv_path, rows)
    summary = summarize(rows, config)
    summary.update({
        "suite": name,
        "cells": len(rows),
        "failed_cells": sum(1 for row in rows if row["status"] not in (CELL_STATUS_OK, "budget")),
        "wall_ms": elapsed_ms(start),
        "csv": csv_path,
    })
    summary["passed"] = all(summary["criteria"].values())
    write_json(summary_path, summary)
    if summary["passed"]:
        logger.info(f"✅ bench {name} passed: {csv_path}, {summary_path}")
    else:
        failed = [key for key, ok in summary["criteria"].items() if not ok]
        logger.warning(f"bench {name} failed {failed}: {csv_path}, {summary_path}")
    return summary
