# === Tricolor - Command Line ===
#
#   tricolor gen --n 60 --degree 8 --seed 1 --out g.col [--planted-out hidden.json]
#   tricolor color --in g.col --r 2 --seed 7 --report rep.json [--out coloring.json] [--db runs.sqlite]
#   tricolor is --in g.col --r 4 --seed 7 --report rep.json [--out set.json]
#   tricolor exact mis --in petersen.col
#   tricolor bench end-to-end --config bench.json --out-dir results/
#   tricolor runs --db runs.sqlite [--limit 20]
#
# Exit status: 0 ok, 1 I/O or input error, 2 usage, 3 budget exceeded,
# 4 promise violation (outputs are still written).
import argparse
import sys
from dataclasses import replace

from .tricolor_bench import SUITE_NAMES, bench_suite
from .tricolor_branching import ratio_from_epsilon
from .tricolor_coloring import PipelineConfig, approx_color
from .tricolor_config import load_all_configs
from .tricolor_errors import BudgetExceededError, DimacsParseError
from .tricolor_exact import DEFAULT_COLOR_BUDGET, DEFAULT_MIS_BUDGET, exact_3color, exact_max_independent_set
from .tricolor_graph import coloring_to_json, gen_planted_3col, read_dimacs_file, write_dimacs_file
from .tricolor_is import IsConfig, approx_independent_set
from .tricolor_log import get_logger, setup_logging
from .tricolor_run_store import RunStore
from .tricolor_utils import dumps_json, ensure_parent_dir, write_json

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_PROMISE = 4


def _add_ratio_arguments(parser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--r", type=float, help="approximation ratio")
    group.add_argument("--epsilon", type=float, help="use r = n^epsilon, epsilon in (0, 1/3)")


def build_parser():
    parser = argparse.ArgumentParser(prog="tricolor", description="Approximate coloring of 3-colorable graphs.")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR (default: [Logging] level)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a planted 3-colorable instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="DIMACS output path")
    p.add_argument("--planted-out", default=None, help="hidden coloring JSON path")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("color", help="color a graph with the peeling pipeline")
    p.add_argument("--in", dest="input", required=True)
    _add_ratio_arguments(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--per-round-calls", type=int, default=None)
    p.add_argument("--repetitions", type=int, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--time-cap-factor", type=float, default=None)
    p.add_argument("--report", required=True)
    p.add_argument("--out", default=None, help="coloring JSON path")
    p.add_argument("--db", default=None, help="SQLite run store to record the run in")
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("is", help="approximate maximum independent set")
    p.add_argument("--in", dest="input", required=True)
    _add_ratio_arguments(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--repetitions", type=int, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--report", required=True)
    p.add_argument("--out", default=None, help="independent set JSON path")
    p.set_defaults(func=cmd_is)

    p = sub.add_parser("exact", help="exact oracles")
    p.add_argument("mode", choices=["mis", "3color"])
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("bench", help="run a benchmark suite")
    p.add_argument("name", choices=SUITE_NAMES)
    p.add_argument("--config", required=True, help="JSON grid file")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("runs", help="list runs recorded in a run store")
    p.add_argument("--db", required=True)
    p.add_argument("--limit", type=int, default=20)
    p.add_argument("--offset", type=int, default=0)
    p.set_defaults(func=cmd_runs)
    return parser


def _resolve_ratio(args, n):
    if args.r is not None:
        return args.r
    return ratio_from_epsilon(max(n, 1), args.epsilon)


def _is_config(args, settings, seed):
    cfg = IsConfig.from_settings(settings, seed)
    if args.repetitions is not None:
        cfg = replace(cfg, repetitions=args.repetitions)
    if args.beta is not None:
        cfg = replace(cfg, beta=args.beta)
    if getattr(args, "time_cap_factor", None) is not None:
        cfg = replace(cfg, time_cap_factor=args.time_cap_factor)
    return cfg


# --- Subcommands ---
def cmd_gen(args, settings):
    instance = gen_planted_3col(args.n, args.degree, args.seed)
    g = instance.graph
    ensure_parent_dir(args.out)
    write_dimacs_file(args.out, g, comments=(
        f"planted 3-colorable instance n={args.n} target_degree={args.degree} seed={args.seed}",
    ))
    if args.planted_out:
        ensure_parent_dir(args.planted_out)
        with open(args.planted_out, "wb") as f:
            f.write(coloring_to_json(instance.hidden_coloring))
    logger.info(f"✅ wrote n={g.vertex_count} m={g.edge_count} max_degree={g.max_degree} to {args.out}")
    return EXIT_OK


def cmd_color(args, settings):
    g = read_dimacs_file(args.input)
    r = _resolve_ratio(args, g.vertex_count)
    cfg = PipelineConfig.from_settings(settings, args.seed)
    cfg = replace(cfg, is_config=_is_config(args, settings, args.seed))
    if args.per_round_calls is not None:
        cfg = replace(cfg, per_round_calls=args.per_round_calls)
    coloring, report = approx_color(g, r, cfg, seed=args.seed)

    write_json(args.report, report.to_dict())
    if args.out:
        write_json(args.out, {"palette": coloring.palette_size, "colors": list(coloring.assignment)})
    if args.db:
        store = RunStore(args.db)
        run_id = store.create_run(report, command="color")
        store.close()
        logger.info(f"recorded run {run_id} in {args.db}")

    if report.promise_violation:
        return EXIT_PROMISE
    if report.exact_budget_exceeded:
        return EXIT_BUDGET
    return EXIT_OK


def cmd_is(args, settings):
    g = read_dimacs_file(args.input)
    r = _resolve_ratio(args, g.vertex_count)
    found, report = approx_independent_set(g, r, _is_config(args, settings, args.seed), seed=args.seed)
    payload = report.to_dict()
    payload["size"] = found.size
    payload["seed"] = args.seed
    write_json(args.report, payload)
    if args.out:
        write_json(args.out, {"size": found.size, "members": list(found.members)})
    logger.info(f"✅ independent set of size {found.size} on n={g.vertex_count}")
    return EXIT_OK


def cmd_exact(args, settings):
    g = read_dimacs_file(args.input)
    if args.mode == "mis":
        found = exact_max_independent_set(g, args.budget or DEFAULT_MIS_BUDGET)
        print(found.size)
        if args.out:
            write_json(args.out, {"size": found.size, "members": list(found.members)})
        return EXIT_OK
    coloring = exact_3color(g, args.budget or DEFAULT_COLOR_BUDGET)
    if coloring is None:
        print("not 3-colorable")
        if args.out:
            write_json(args.out, None)
        return EXIT_OK
    print(dumps_json({"palette": coloring.palette_size, "colors": list(coloring.assignment)}))
    if args.out:
        write_json(args.out, {"palette": coloring.palette_size, "colors": list(coloring.assignment)})
    return EXIT_OK


def cmd_bench(args, settings):
    summary = bench_suite(args.name, args.config, args.out_dir, settings)
    print(dumps_json({"suite": summary["suite"], "passed": summary["passed"], "criteria": summary["criteria"]}))
    return EXIT_OK


def cmd_runs(args, settings):
    store = RunStore(args.db)
    for run in store.list_runs(args.limit, args.offset):
        print(dumps_json(run))
    store.close()
    return EXIT_OK


# --- Entry Point ---
def cli_main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    settings = load_all_configs()
    setup_logging(args.log_level or settings['logging']['level'])
    try:
        return args.func(args, settings)
    except BudgetExceededError as e:
        logger.warning(str(e))
        if e.best is not None:
            print(e.best.size)
        return EXIT_BUDGET
    except (DimacsParseError, UnicodeDecodeError, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_IO
    except ValueError as e:
        logger.error(str(e))
        return EXIT_USAGE


def main():
    sys.exit(cli_main())
