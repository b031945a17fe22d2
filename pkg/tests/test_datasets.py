# -*- coding: utf-8 -*-
"""Checks against public network datasets; skipped unless KNUB_DATA_DIR holds the files."""

import os

import pytest

from knub_estimator import solve_with_reduction
from knub_graph import density, read_graph
from knub_participation import count_r_cliques
from knub_reduction import ReductionParams, k_nub
from knub_search import SolverBudget

DATA_DIR = os.environ.get("KNUB_DATA_DIR", "")
BUDGET = SolverBudget(max_time=3600, max_nodes=500_000_000)


def dataset(name: str):
    path = os.path.join(DATA_DIR, name)
    if not DATA_DIR or not os.path.exists(path):
        pytest.skip(f"{name} not found in KNUB_DATA_DIR")
    return read_graph(path)


@pytest.mark.slow
def test_hamsterster():
    g = dataset("hamsterster.edges")
    assert (g.n, g.m) == (2500, 16630)
    stats = count_r_cliques(g, 5, threads=os.cpu_count() or 1)
    assert stats.total == 298_013
    survivor = k_nub(g, stats, ReductionParams(k=25, r=5)).survivor
    assert (survivor.n, survivor.m) == (25, 300)
    assert solve_with_reduction(g, 5, BUDGET, stats=stats).lower == 25


@pytest.mark.slow
def test_tv_shows():
    g = dataset("tvshow.edges")
    assert (g.n, g.m) == (3900, 17262)
    stats = count_r_cliques(g, 5, threads=os.cpu_count() or 1)
    survivor = k_nub(g, stats, ReductionParams(k=57, r=5)).survivor
    assert survivor.n == 61
    assert float(density(survivor)) == pytest.approx(0.9945, abs=0.0005)
    res = solve_with_reduction(g, 5, BUDGET, stats=stats)
    assert res.is_exact()
    assert res.lower == 57


@pytest.mark.slow
def test_facebook_triangles():
    g = dataset("facebook_combined.txt")
    assert count_r_cliques(g, 3, threads=os.cpu_count() or 1).total == 1_612_010
