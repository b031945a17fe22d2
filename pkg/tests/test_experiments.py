# -*- coding: utf-8 -*-

import os
from dataclasses import replace
from math import comb

import pytest

import knub_experiments
from knub_errors import ConsistencyError, DomainError
from knub_estimator import estimate_k_from_mean_participation
from knub_experiments import (
    BENCH_COLUMNS, BenchConfig, aggregate_bench, bench_frame, compare_core_vs_nub, gen_erdos_renyi,
    pipeline_k, run_er_benchmark,
)
from knub_graph import density
from knub_participation import count_r_cliques
from knub_search import SolverBudget, max_clique_exact
from knub_tracker import tracker
from sample_graphs import complete, cycle

BUDGET = SolverBudget(max_time=120, max_nodes=10_000_000)


# -----------------------------
# Generation
# -----------------------------
def test_same_seed_same_graph():
    a = gen_erdos_renyi(60, 0.3, seed=9)
    b = gen_erdos_renyi(60, 0.3, seed=9)
    c = gen_erdos_renyi(60, 0.3, seed=10)
    assert a == b
    assert a != c


def test_near_one_density():
    g = gen_erdos_renyi(10, 0.999999, seed=3)
    assert density(g) == 1


def test_mean_density_concentrates():
    values = [float(density(gen_erdos_renyi(1000, 0.1, seed=s))) for s in range(1, 11)]
    assert abs(sum(values) / len(values) - 0.1) < 0.01


@pytest.mark.parametrize("n,p", [(0, 0.5), (5, 0.0), (5, 1.0), (5, -0.1)])
def test_generator_domain(n, p):
    with pytest.raises(DomainError):
        gen_erdos_renyi(n, p, seed=1)


# -----------------------------
# Config
# -----------------------------
def test_config_validation():
    with pytest.raises(DomainError):
        BenchConfig(replicates=0)
    with pytest.raises(DomainError):
        BenchConfig(densities=[1.2])
    with pytest.raises(DomainError):
        BenchConfig(k_strategy="guess")


def test_config_from_dict():
    cfg = BenchConfig.from_dict({
        "orders": [50], "densities": [0.3], "replicates": 2,
        "budget": {"max_time": 30, "max_nodes": 1000}, "colour": "blue",
    })
    assert cfg.orders == [50]
    assert cfg.replicates == 2
    assert cfg.budget == SolverBudget(max_time=30, max_nodes=1000)
    assert cfg.k_strategy == "mean-participation"


def test_config_from_json(tmp_path):
    path = tmp_path / "bench.json"
    path.write_text('{"orders": [20], "densities": [0.5], "replicates": 1, "timings": false}')
    cfg = BenchConfig.from_json(str(path))
    assert cfg.timings is False
    assert cfg.budget == SolverBudget()


def test_sample_config_leaves_timings_off():
    path = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "bench.json")
    cfg = BenchConfig.from_json(path)
    assert cfg.timings is False
    assert not tracker.warnings


# -----------------------------
# Benchmark
# -----------------------------
def test_benchmark_rows_match_exact_solver():
    cfg = BenchConfig(orders=[200], densities=[0.3], replicates=3, r=3, seed=1, budget=BUDGET)
    rows, agg = run_er_benchmark(cfg)
    assert [row.seed for row in rows] == [1, 2, 3]
    for row in rows:
        g = gen_erdos_renyi(row.n, row.p, row.seed)
        assert row.clique_size == max_clique_exact(g, BUDGET).lower
        assert 0 <= row.percent_reduced <= 1
        assert row.percent_reduced == 1 - row.survivor_order / row.n
        assert row.reduction_time is not None
    assert len(agg) == 1
    assert agg.loc[0, "clique_size_mean"] == pytest.approx(sum(r.clique_size for r in rows) / 3)


def test_single_row_benchmark():
    cfg = BenchConfig(orders=[10], densities=[0.5], replicates=1, budget=BUDGET, solve_original=True)
    rows, _ = run_er_benchmark(cfg)
    assert len(rows) == 1
    assert 0 <= rows[0].percent_reduced <= 1
    assert rows[0].core_order <= 10


def test_benchmark_csv_is_reproducible():
    cfg = BenchConfig(orders=[40, 60], densities=[0.2, 0.5], replicates=2, budget=BUDGET, timings=False)
    first = bench_frame(run_er_benchmark(cfg)[0]).to_csv(index=False)
    second = bench_frame(run_er_benchmark(cfg)[0]).to_csv(index=False)
    assert first == second
    assert first.splitlines()[0] == ",".join(BENCH_COLUMNS)
    assert len(first.splitlines()) == 1 + 8


def test_bench_frame_dtypes():
    cfg = BenchConfig(orders=[30], densities=[0.4], replicates=2, budget=BUDGET, timings=False)
    df = bench_frame(run_er_benchmark(cfg)[0])
    assert str(df["clique_size"].dtype) == "Int64"
    assert str(df["percent_reduced"].dtype) == "Float64"
    assert df["reduction_time"].isna().all()
    agg = aggregate_bench(df)
    assert list(agg[["n", "p"]].itertuples(index=False, name=None)) == [(30, 0.4)]


def test_refined_strategy_uses_refined_bound():
    g = gen_erdos_renyi(80, 0.3, seed=4)
    stats = count_r_cliques(g, 3)
    k = pipeline_k(stats, g.m, "refined")
    assert comb(k, 3) <= stats.total
    assert k >= max_clique_exact(g, BUDGET).lower


def test_mean_participation_k_is_capped_by_refined_bound():
    g = complete(10)
    stats = count_r_cliques(g, 3)
    # mean EP is 8, so the uncapped estimate overshoots the 10 vertices
    assert estimate_k_from_mean_participation(stats, g.m) == 11
    assert pipeline_k(stats, g.m) == 10
    assert pipeline_k(stats, g.m, "refined") == 10


def test_pipeline_k_without_triangles():
    g = cycle(5)
    assert pipeline_k(count_r_cliques(g, 3), g.m) == 3


def test_original_solve_agrees_with_reduced_solve():
    cfg = BenchConfig(orders=[30], densities=[0.4], replicates=2, budget=BUDGET, solve_original=True, timings=False)
    rows, _ = run_er_benchmark(cfg)
    assert len(rows) == 2
    assert not tracker.has_critical_errors()
    for row in rows:
        assert row.solve_time_original is None
        assert row.clique_size == max_clique_exact(gen_erdos_renyi(30, 0.4, row.seed), BUDGET).lower


def test_original_solve_disagreement_is_an_error(monkeypatch):
    solve = knub_experiments.solve_with_reduction

    def off_by_one(*args, **kwargs):
        res = solve(*args, **kwargs)
        return replace(res, lower=res.lower - 1, upper=res.lower - 1)

    monkeypatch.setattr(knub_experiments, "solve_with_reduction", off_by_one)
    cfg = BenchConfig(orders=[30], densities=[0.4], replicates=1, budget=BUDGET, solve_original=True, timings=False)
    rows, _ = run_er_benchmark(cfg)
    assert rows == []
    assert tracker.has_critical_errors()
    assert tracker.errors[0]["type"] == "consistency_error"


# -----------------------------
# Core vs nub
# -----------------------------
def test_core_vs_nub_on_complete_graph():
    g = complete(10)
    stats = count_r_cliques(g, 3)
    for k in range(3, 11):
        assert compare_core_vs_nub(g, stats, k, 3) == 1.0


def test_core_vs_nub_on_fig1(fig1):
    stats = count_r_cliques(fig1, 3)
    assert compare_core_vs_nub(fig1, stats, 4, 3) == pytest.approx(5 / 12)
    assert compare_core_vs_nub(fig1, stats, 5, 3) == 0.0


def test_core_vs_nub_checks_r(fig1):
    with pytest.raises(ConsistencyError):
        compare_core_vs_nub(fig1, count_r_cliques(fig1, 4), 5, 3)


# -----------------------------
# Desk-scale reproduction
# -----------------------------
@pytest.mark.slow
@pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
def test_sparse_thousand_vertex_clique_size(seed):
    cfg = BenchConfig(orders=[1000], densities=[0.1], replicates=1, seed=seed, budget=BUDGET, timings=False)
    rows, _ = run_er_benchmark(cfg)
    assert rows[0].clique_size in (5, 6)


@pytest.mark.slow
@pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
def test_denser_thousand_vertex_clique_size(seed):
    cfg = BenchConfig(orders=[1000], densities=[0.3], replicates=1, seed=seed, budget=BUDGET, timings=False)
    rows, _ = run_er_benchmark(cfg)
    assert rows[0].clique_size in (8, 9, 10)


@pytest.mark.slow
@pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
def test_core_vs_nub_band(seed):
    g = gen_erdos_renyi(1000, 0.3, seed=seed)
    stats = count_r_cliques(g, 3)
    ratio = compare_core_vs_nub(g, stats, pipeline_k(stats, g.m), 3)
    assert 0.50 <= ratio <= 0.85
