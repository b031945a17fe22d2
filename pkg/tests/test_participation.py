# -*- coding: utf-8 -*-

import time

import networkx as nx
import pytest

from knub_errors import BudgetExhausted, ConsistencyError, DomainError
from knub_participation import (
    CliqueStats, check_handshake, check_stats_match, count_r_cliques, load_stats,
    max_participation, save_stats,
)
from sample_graphs import complete, edgeless, naive_counts, random_cases, random_graph

FIG1_VP = [2, 2, 2, 2, 3, 8, 5, 2, 7, 1, 1, 5, 5, 3]


def test_k4_triangles():
    stats = count_r_cliques(complete(4), 3)
    assert stats.total == 4
    assert stats.vp == [3, 3, 3, 3]
    assert len(stats.ep) == 6
    assert set(stats.ep.values()) == {2}
    assert max_participation(stats) == (3, 2)


def test_k6_triangles():
    stats = count_r_cliques(complete(6), 3)
    assert stats.total == 20
    assert set(stats.vp) == {10}
    assert set(stats.ep.values()) == {4}


def test_fig1_triangles(fig1):
    stats = count_r_cliques(fig1, 3)
    assert stats.total == 16
    assert stats.vp == FIG1_VP
    assert stats.ep_of(5, 6) == 2
    assert stats.ep_of(6, 5) == 2
    assert stats.ep_of(8, 13) == 2
    assert stats.ep_of(4, 9) == 1
    assert stats.ep_of(9, 10) == 1
    assert stats.ep_of(0, 13) == 0
    assert max_participation(stats) == (8, 3)
    assert {e for e, c in stats.ep.items() if c == 3} == {(6, 8), (8, 11), (8, 12), (11, 12)}


def test_fig1_matches_networkx_triangles(fig1):
    h = nx.Graph(list(fig1.edges()))
    expected = nx.triangles(h)
    assert count_r_cliques(fig1, 3).vp == [expected[v] for v in range(fig1.n)]


def test_r2_is_edges_and_degrees(fig1):
    stats = count_r_cliques(fig1, 2)
    assert stats.total == 27
    assert stats.vp == fig1.degrees()
    assert set(stats.ep.values()) == {1}


def test_r_below_two():
    with pytest.raises(DomainError):
        count_r_cliques(complete(3), 1)


def test_edgeless_and_large_r():
    assert max_participation(count_r_cliques(edgeless(5), 3)) == (0, 0)
    stats = count_r_cliques(complete(4), 5)
    assert stats.total == 0
    assert stats.ep == {}


def test_complete_graph_higher_orders():
    g = complete(7)
    for r in (3, 4, 5, 6, 7):
        stats = count_r_cliques(g, r)
        assert check_handshake(stats)
    assert count_r_cliques(g, 7).total == 1
    assert count_r_cliques(g, 5).total == 21


@pytest.mark.parametrize("case,g", random_cases(40, 4, 14, seed=21))
def test_matches_subset_enumeration(case, g):
    for r in (3, 4, 5):
        total, vp, ep = naive_counts(g, r)
        stats = count_r_cliques(g, r)
        assert stats.total == total
        assert stats.vp == vp
        assert stats.ep == ep
        assert check_handshake(stats)


@pytest.mark.slow
@pytest.mark.parametrize("case,g", random_cases(200, 4, 20, seed=22))
def test_matches_subset_enumeration_full(case, g):
    for r in (3, 4, 5):
        total, vp, ep = naive_counts(g, r)
        stats = count_r_cliques(g, r)
        assert (stats.total, stats.vp, stats.ep) == (total, vp, ep)
        assert check_handshake(stats)


@pytest.mark.parametrize("case,g", random_cases(15, 10, 30, seed=23))
def test_restriction_never_raises_participation(case, g):
    keep = [v for v in range(g.n) if v % 3]
    sub = g.induced(keep)
    parent = count_r_cliques(g, 3)
    child = count_r_cliques(sub, 3)
    for i, label in enumerate(sub.labels):
        assert child.vp[i] <= parent.vp[g.label_index[label]]


def test_workers_match_single_process():
    g = random_graph(120, 0.4, seed=5)
    assert g.m > 2048
    one = count_r_cliques(g, 4, threads=1)
    two = count_r_cliques(g, 4, threads=2)
    assert one == two


def test_deadline_in_the_past(fig1):
    with pytest.raises(BudgetExhausted):
        count_r_cliques(fig1, 3, deadline=time.monotonic() - 1)


def test_handshake_detects_tampering():
    stats = count_r_cliques(complete(5), 3)
    assert check_handshake(stats)
    stats.vp[0] += 1
    assert not check_handshake(stats)


def test_stats_match_checks(fig1):
    stats = count_r_cliques(fig1, 3)
    check_stats_match(fig1, stats)
    with pytest.raises(ConsistencyError):
        check_stats_match(complete(14), CliqueStats(r=3, total=0, vp=[0] * 13))
    with pytest.raises(ConsistencyError):
        check_stats_match(fig1, CliqueStats(r=3, total=1, vp=[0] * 14, ep={(0, 13): 1}))


def test_save_and_load(tmp_path, fig1):
    stats = count_r_cliques(fig1, 3)
    path = str(tmp_path / "stats.json")
    save_stats(path, stats, fig1, graph_sha256="abc")
    assert load_stats(path, fig1, graph_sha256="abc") == stats
    assert load_stats(path) == stats
    with pytest.raises(ConsistencyError):
        load_stats(path, graph_sha256="def")
    with pytest.raises(ConsistencyError):
        load_stats(path, complete(5))


def test_load_malformed(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"r": 3}')
    with pytest.raises(ConsistencyError):
        load_stats(str(path))
