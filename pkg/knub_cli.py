#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import os
import sys
import json
import time
import argparse
from typing import List, Optional, Tuple

from knub_errors import BudgetExhausted, ConsistencyError, DomainError, GraphParseError
from knub_estimator import initial_k_upper, refine_k_by_participation, solve_with_reduction
from knub_experiments import BenchConfig, compare_core_vs_nub, gen_erdos_renyi, pipeline_k, run_er_benchmark, bench_frame
from knub_graph import FORMATS, Graph, graph_fingerprint, guess_format, parse_edge_list, write_snap
from knub_participation import CliqueStats, count_r_cliques, load_stats, save_stats
from knub_reduction import ReductionParams, k_nub, recount_nub, report_to_dict
from knub_search import SolverBudget
from knub_tracker import say, tracker

# -----------------------------------
# Config via environment
# -----------------------------------
THREADS     = int(os.environ.get("KNUB_THREADS", os.cpu_count() or 1))
TIME_BUDGET = float(os.environ.get("KNUB_TIME_BUDGET", "600"))
NODE_BUDGET = int(os.environ.get("KNUB_NODE_BUDGET", "50000000"))
CACHE_DIR   = os.environ.get("KNUB_CACHE_DIR", ".knub_cache")

LARGE_ORDERS = [2000, 4000]


# -----------------------------------
# Helpers
# -----------------------------------
def emit(text: str, path: Optional[str]) -> None:
    """Machine output goes to `path`, or stdout when no path is given."""
    if path:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        say(f"💾 wrote {path}")
    else:
        sys.stdout.write(text)


def load_input(args) -> Tuple[Graph, str]:
    with open(args.input, "rb") as f:
        data = f.read()
    g = parse_edge_list(data, args.format or guess_format(args.input))
    tracker.set_stat("n", g.n)
    tracker.set_stat("m", g.m)
    return g, graph_fingerprint(data)


def check_r(r: int) -> None:
    if r < 2:
        raise DomainError(f"r must be >= 2, got {r}")
    if r == 2:
        tracker.add_warning("r_degenerate", "r=2: participation thresholds reduce to degree tests")


def budget_from(args) -> SolverBudget:
    return SolverBudget(max_time=args.time_budget, max_nodes=args.node_budget)


def cache_path(sha: str, r: int) -> str:
    return os.path.join(CACHE_DIR, f"{sha[:16]}_r{r}.json")


def stats_for(g: Graph, sha: str, r: int, args, save_to: Optional[str] = None) -> CliqueStats:
    """
    Stats from --stats, then the cache, else count. The result is written to
    `save_to`, and to --stats and the cache when those files do not exist yet.
    """
    explicit = getattr(args, "stats", None)
    cached = cache_path(sha, r)
    targets = list(dict.fromkeys(p for p in (save_to, explicit, cached) if p))

    for path in (explicit, cached):
        if not path or not os.path.exists(path):
            continue
        stats = load_stats(path, g, graph_sha256=sha)
        if stats.r == r:
            say(f"📂 using stats from {path}")
            store_stats(stats, g, sha, [t for t in targets if t != path], save_to)
            return stats
        tracker.add_warning("stats_mismatch", f"{path} holds r={stats.r}, recounting for r={r}")

    t0 = time.monotonic()
    stats = count_r_cliques(g, r, threads=args.threads, deadline=t0 + args.time_budget)
    tracker.set_stat("count_seconds", round(time.monotonic() - t0, 3))
    tracker.set_stat(f"k{r}_total", stats.total)
    store_stats(stats, g, sha, targets, save_to)
    return stats


def store_stats(stats: CliqueStats, g: Graph, sha: str, targets: List[str], save_to: Optional[str]) -> None:
    for target in targets:
        if target != save_to and os.path.exists(target):
            continue
        try:
            os.makedirs(os.path.dirname(target) or ".", exist_ok=True)
            save_stats(target, stats, g, graph_sha256=sha)
        except OSError as e:
            if target == save_to:
                raise
            tracker.add_warning("cache", f"could not write stats to {target}: {e}")


# -----------------------------------
# Subcommands
# -----------------------------------
def cmd_count(args) -> None:
    check_r(args.r)
    g, sha = load_input(args)
    stats = stats_for(g, sha, args.r, args, save_to=args.out)
    label = "triangles" if args.r == 3 else f"K{args.r} cliques"
    print(f"{label}: {stats.total}")


def cmd_reduce(args) -> None:
    check_r(args.r)
    g, sha = load_input(args)
    stats = stats_for(g, sha, args.r, args)
    k = args.k
    if k is None:
        fact5 = initial_k_upper(stats.total, args.r)
        k = max(refine_k_by_participation(stats, fact5, not args.edge_only), args.r)
        say(f"📐 estimated k = {k} (count bound {fact5})")

    params = ReductionParams(k=k, r=args.r)
    if args.recount:
        report = recount_nub(g, params, stats, threads=args.threads)
    else:
        report = k_nub(g, stats, params)

    survivor = report.survivor
    tracker.set_stat("survivor_order", survivor.n)
    tracker.set_stat("survivor_size", survivor.m)
    if survivor.n == 0:
        say(f"✅ {k}-nub is empty: no {k}-clique exists")
    emit(write_snap(survivor, source=f"{args.input} {k}-nub r={args.r}"), args.out)
    if args.report:
        emit(json.dumps(report_to_dict(report, source=args.input), indent=2) + "\n", args.report)


def cmd_solve(args) -> None:
    check_r(args.r)
    g, sha = load_input(args)
    stats = None if args.core_first else stats_for(g, sha, args.r, args)
    result = solve_with_reduction(
        g,
        args.r,
        budget_from(args),
        threads=args.threads,
        stats=stats,
        use_vertex_condition=not args.edge_only,
        recount=args.recount,
        core_first=args.core_first,
    )
    tracker.set_stat("result", f"{result.kind} [{result.lower}, {result.upper}]")
    out = result.to_dict()
    trace = out.pop("search", None)
    emit(json.dumps(out) + "\n", args.out)
    if args.trace:
        emit(json.dumps(trace, indent=2) + "\n", args.trace)


def cmd_bench(args) -> None:
    cfg = BenchConfig.from_json(args.config) if args.config else BenchConfig()
    cfg.threads = args.threads
    cfg.budget = budget_from(args) if args.budget_flags else cfg.budget
    if args.large:
        cfg.orders = cfg.orders + [n for n in LARGE_ORDERS if n not in cfg.orders]
        tracker.add_warning("large", "n=2000/4000 cells can take hours")
    rows, agg = run_er_benchmark(cfg)
    emit(bench_frame(rows).to_csv(index=False), args.out)
    if args.aggregate:
        emit(agg.to_csv(index=False), args.aggregate)


def cmd_compare_core(args) -> None:
    check_r(args.r)
    g, sha = load_input(args)
    stats = stats_for(g, sha, args.r, args)
    k = args.k if args.k is not None else max(pipeline_k(stats, g.m), args.r)
    ratio = compare_core_vs_nub(g, stats, k, args.r)
    tracker.set_stat("k", k)
    print(f"{ratio:.6f}")


def cmd_generate(args) -> None:
    g = gen_erdos_renyi(args.n, args.p, args.seed)
    tracker.set_stat("m", g.m)
    emit(write_snap(g, source=f"G({args.n}, {args.p}) seed={args.seed}"), args.out)


# -----------------------------------
# Main
# -----------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-q", "--quiet", action="store_true", help="no progress output")
    common.add_argument("-v", "--verbose", action="store_true", help="per-step detail")
    common.add_argument("--threads", type=int, default=THREADS)
    common.add_argument("--time-budget", type=float, default=None, help=f"seconds (default {TIME_BUDGET:g})")
    common.add_argument("--node-budget", type=int, default=None, help=f"search nodes (default {NODE_BUDGET})")
    common.add_argument("--out", help="output file (default stdout)")

    graph_in = argparse.ArgumentParser(add_help=False)
    graph_in.add_argument("input", help="edge list (snap-txt) or MatrixMarket file")
    graph_in.add_argument("--format", choices=FORMATS, help="input format (default: by extension)")
    graph_in.add_argument("--r", type=int, default=3, help="participation order")

    parser = argparse.ArgumentParser(description="k-nub graph reduction and maximum clique search")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common, graph_in], help="count r-cliques and save participation stats")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("reduce", parents=[common, graph_in], help="write the k-nub of a graph")
    p.add_argument("--k", type=int)
    p.add_argument("--stats", help="stats JSON from `count`")
    p.add_argument("--report", help="reduction report JSON path")
    p.add_argument("--recount", action="store_true")
    p.add_argument("--edge-only", action="store_true", help="estimate k from edge participation only")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", parents=[common, graph_in], help="maximum clique via reduction")
    p.add_argument("--stats")
    p.add_argument("--trace", help="write the per-iteration search trace here")
    p.add_argument("--recount", action="store_true")
    p.add_argument("--core-first", action="store_true")
    p.add_argument("--edge-only", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", parents=[common], help="G(n, p) reduction benchmark, CSV out")
    p.add_argument("--config", help="bench config JSON")
    p.add_argument("--aggregate", help="mean/std per (n, p) CSV path")
    p.add_argument("--large", action="store_true", help="add n=2000 and n=4000")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("compare-core", parents=[common, graph_in], help="k-nub order over main-core order")
    p.add_argument("--k", type=int)
    p.add_argument("--stats")
    p.set_defaults(func=cmd_compare_core)

    p = sub.add_parser("generate", parents=[common], help="write G(n, p) as snap-txt")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: Optional[List[str]] = None) -> None:
    args = build_parser().parse_args(argv)
    tracker.reset()
    tracker.quiet = args.quiet
    tracker.verbose = args.verbose
    args.budget_flags = args.time_budget is not None or args.node_budget is not None
    if args.time_budget is None:
        args.time_budget = TIME_BUDGET
    if args.node_budget is None:
        args.node_budget = NODE_BUDGET

    try:
        args.func(args)
    except GraphParseError as e:
        tracker.add_error("parse_failure", f"could not parse {getattr(args, 'input', '')}", e)
    except OSError as e:
        tracker.add_error("io_failure", "file access failed", e)
    except DomainError as e:
        tracker.add_error("domain_error", f"bad argument for {args.command}", e)
    except ConsistencyError as e:
        tracker.add_error("consistency_error", f"{args.command} stopped", e)
    except BudgetExhausted as e:
        tracker.add_error("budget_exhausted", f"{args.command} ran out of time", e)
    finally:
        if not tracker.quiet:
            print(tracker.get_summary(), file=sys.stderr)
        if tracker.should_exit_with_error():
            print("🚨 EXITING WITH ERROR DUE TO CRITICAL FAILURES", file=sys.stderr)
            sys.exit(1)


if __name__ == "__main__":
    main()
