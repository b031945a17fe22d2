#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Random-graph experiments: G(n, p) generation, the reduction benchmark sweep,
and the k-core vs k-nub size comparison.
"""

import json
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from knub_errors import ConsistencyError, DomainError, KnubError
from knub_estimator import estimate_k_from_mean_participation, initial_k_upper, refine_k_by_participation, solve_with_reduction
from knub_graph import Graph, c_core, main_core
from knub_participation import CliqueStats, count_r_cliques
from knub_reduction import ReductionParams, k_nub
from knub_search import SolverBudget, max_clique_exact
from knub_tracker import say, tracker

K_STRATEGIES = ("mean-participation", "refined")

BENCH_COLUMNS = [
    "n", "p", "seed", "reduction_time", "survivor_order", "percent_reduced", "k_used",
    "solve_time_original", "solve_time_reduced", "clique_size", "core_order",
]


@dataclass
class BenchConfig:
    orders: List[int] = field(default_factory=lambda: [200, 500, 1000])
    densities: List[float] = field(default_factory=lambda: [0.1, 0.3, 0.4])
    replicates: int = 10
    r: int = 3
    seed: int = 1
    budget: SolverBudget = field(default_factory=SolverBudget)
    solve_original: bool = False
    k_strategy: str = "mean-participation"
    timings: bool = True
    threads: int = 1

    def __post_init__(self):
        if self.replicates < 1:
            raise DomainError(f"replicates must be >= 1, got {self.replicates}")
        if any(not (0 < p < 1) for p in self.densities):
            raise DomainError(f"densities must lie in (0, 1), got {self.densities}")
        if any(n < 1 for n in self.orders):
            raise DomainError(f"orders must be >= 1, got {self.orders}")
        if self.k_strategy not in K_STRATEGIES:
            raise DomainError(f"k_strategy must be one of {K_STRATEGIES}, got {self.k_strategy!r}")

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> "BenchConfig":
        raw = dict(raw)
        budget = raw.pop("budget", None) or {}
        known = {k: v for k, v in raw.items() if k in cls.__dataclass_fields__}
        for unknown in sorted(set(raw) - set(known)):
            tracker.add_warning("config", f"ignoring unknown bench key {unknown!r}")
        return cls(budget=SolverBudget(**budget), **known)

    @classmethod
    def from_json(cls, path: str) -> "BenchConfig":
        with open(path, "r", encoding="utf-8") as f:
            return cls.from_dict(json.load(f))


@dataclass
class BenchRow:
    n: int
    p: float
    seed: int
    reduction_time: Optional[float]
    survivor_order: int
    percent_reduced: float
    k_used: int
    solve_time_original: Optional[float]
    solve_time_reduced: Optional[float]
    clique_size: Optional[int]
    core_order: int


# -----------------------------
# Generation
# -----------------------------
def gen_erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p) from a Philox generator; row i draws the pairs (i, i+1..n-1)."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not (0 < p < 1):
        raise DomainError(f"p must lie in (0, 1), got {p}")
    rng = np.random.Generator(np.random.Philox(seed))
    edges: List[Tuple[int, int]] = []
    for i in range(n - 1):
        hits = np.nonzero(rng.random(n - i - 1) < p)[0]
        edges.extend((i, i + 1 + int(j)) for j in hits)
    return Graph.from_edges(n, edges)


# -----------------------------
# Benchmark
# -----------------------------
def pipeline_k(stats: CliqueStats, m: int, strategy: str = "mean-participation") -> int:
    """
    The k a benchmark row reduces with. The mean-participation estimate is
    capped by the participation-refined bound, since no larger k can leave a
    non-empty nub.
    """
    bound = initial_k_upper(stats.total, stats.r)
    refined = refine_k_by_participation(stats, bound) if bound >= stats.r else bound
    if strategy == "refined":
        return refined
    estimate = estimate_k_from_mean_participation(stats, m)
    return min(estimate, refined) if refined >= stats.r else estimate


def _timed_exact(g: Graph, budget: SolverBudget) -> Tuple[Optional[float], Optional[int]]:
    """(seconds, clique number) of an exact solve; both None when it runs out of budget."""
    t0 = time.perf_counter()
    res = max_clique_exact(g, budget)
    if not res.is_exact():
        return None, None
    return round(time.perf_counter() - t0, 6), res.lower


def _bench_one(cfg: BenchConfig, n: int, p: float, seed: int) -> BenchRow:
    g = gen_erdos_renyi(n, p, seed)

    t0 = time.perf_counter()
    stats = count_r_cliques(g, cfg.r, threads=cfg.threads)
    k = pipeline_k(stats, g.m, cfg.k_strategy)
    if k < cfg.r:
        survivor = c_core(g, k - 1)
    else:
        survivor = k_nub(g, stats, ReductionParams(k=k, r=cfg.r)).survivor
    reduction_time = round(time.perf_counter() - t0, 6)

    solve_reduced = solve_original = original_size = None
    if cfg.timings:
        solve_reduced, _ = _timed_exact(survivor, cfg.budget)
    if cfg.solve_original:
        solve_original, original_size = _timed_exact(g, cfg.budget)

    result = solve_with_reduction(g, cfg.r, cfg.budget, threads=cfg.threads, stats=stats)
    clique_size = result.lower if result.is_exact() else None
    if clique_size is not None and original_size is not None and clique_size != original_size:
        raise ConsistencyError(
            f"G({n}, {p}) seed {seed}: reduced solve found {clique_size}, original solve found {original_size}"
        )
    return BenchRow(
        n=n,
        p=p,
        seed=seed,
        reduction_time=reduction_time if cfg.timings else None,
        survivor_order=survivor.n,
        percent_reduced=1 - survivor.n / n,
        k_used=k,
        solve_time_original=solve_original if cfg.timings else None,
        solve_time_reduced=solve_reduced,
        clique_size=clique_size,
        core_order=main_core(g).n,
    )


def run_er_benchmark(cfg: BenchConfig) -> Tuple[List[BenchRow], pd.DataFrame]:
    """One row per (n, p, replicate) in that order, plus the per-cell mean/std table."""
    rows: List[BenchRow] = []
    for n in cfg.orders:
        for p in cfg.densities:
            for i in range(cfg.replicates):
                seed = cfg.seed + i
                say(f"🎲 G({n}, {p}) seed {seed}")
                try:
                    rows.append(_bench_one(cfg, n, p, seed))
                except ConsistencyError as e:
                    tracker.add_error("consistency_error", f"G({n}, {p}) seed {seed}", e)
                except KnubError as e:
                    tracker.add_warning("bench_row", f"G({n}, {p}) seed {seed} skipped: {e}")
    tracker.set_stat("bench_rows", len(rows))
    return rows, aggregate_bench(bench_frame(rows))


def coerce_bench_dtypes(df: pd.DataFrame) -> pd.DataFrame:
    if df is None or df.empty:
        return df
    df = df.copy()
    int_cols = ["n", "seed", "survivor_order", "k_used", "clique_size", "core_order"]
    for c in int_cols:
        if c in df.columns:
            df[c] = pd.to_numeric(df[c], errors="coerce").astype("Int64")
    float_cols = ["p", "reduction_time", "percent_reduced", "solve_time_original", "solve_time_reduced"]
    for c in float_cols:
        if c in df.columns:
            df[c] = pd.to_numeric(df[c], errors="coerce").astype("Float64")
    return df


def bench_frame(rows: List[BenchRow]) -> pd.DataFrame:
    return coerce_bench_dtypes(pd.DataFrame([asdict(r) for r in rows], columns=BENCH_COLUMNS))


def aggregate_bench(df: pd.DataFrame) -> pd.DataFrame:
    if df.empty:
        return df
    value_cols = [c for c in BENCH_COLUMNS if c not in ("n", "p", "seed")]
    agg = df.groupby(["n", "p"], sort=False)[value_cols].agg(["mean", "std"])
    agg.columns = [f"{col}_{stat}" for col, stat in agg.columns]
    return agg.reset_index()


# -----------------------------
# Core vs nub
# -----------------------------
def compare_core_vs_nub(g: Graph, stats: CliqueStats, k: int, r: int) -> float:
    """
    Share of the core's vertices that survive in the k-nub. The core is the
    main core when it holds the nub, else the (k-1)-core.
    """
    if stats.r != r:
        raise ConsistencyError(f"stats are for r={stats.r}, comparison asks for r={r}")
    nub = k_nub(g, stats, ReductionParams(k=k, r=r)).survivor
    if nub.n == 0:
        return 0.0
    core = main_core(g)
    if not set(nub.labels) <= set(core.labels):
        core = c_core(g, k - 1)
    if core.n == 0:
        raise ConsistencyError(f"k-nub has {nub.n} vertices but the core is empty")
    return nub.n / core.n
