#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
k-nub reduction.

Given r-clique participation counts, a k-clique can only use edges with
EP_r >= C(k-2, r-2) and vertices with VP_r >= C(k-1, r-1), and each of its
vertices keeps degree >= k-1 among the survivors. The k-nub is what is left
after applying the three filters in that order:

  1. drop edges below the edge bound
  2. drop vertices below the vertex bound
  3. peel to the (k-1)-core

Every clique of order >= k survives. The counts from the input graph are used
throughout; `recount_nub` is the variant that recounts on the survivor.
"""

from dataclasses import dataclass, field, replace
from math import comb
from typing import Any, Dict, List, Optional, Set, Tuple

from knub_errors import ConsistencyError, DomainError
from knub_graph import Graph, density
from knub_participation import CliqueStats, check_stats_match, count_r_cliques
from knub_tracker import say


@dataclass(frozen=True)
class ReductionParams:
    k: int
    r: int

    def __post_init__(self):
        if self.r < 2 or self.r > self.k:
            raise DomainError(f"need 2 <= r <= k, got k={self.k}, r={self.r}")


@dataclass
class ReductionReport:
    k: int
    r: int
    e_bound: int
    v_bound: int
    edges_removed_step1: int
    vertices_removed_step2: int
    vertices_removed_step3: int
    survivor: Graph
    # survivor vertex i is input vertex kept[i]
    kept: List[int] = field(default_factory=list)
    rounds: int = 1


def participation_thresholds(k: int, r: int) -> Tuple[int, int]:
    if r < 2 or r > k:
        raise DomainError(f"need 2 <= r <= k, got k={k}, r={r}")
    return comb(k - 2, r - 2), comb(k - 1, r - 1)


def k_nub(g: Graph, stats: CliqueStats, params: ReductionParams) -> ReductionReport:
    if stats.r != params.r:
        raise ConsistencyError(f"stats are for r={stats.r}, reduction asks for r={params.r}")
    check_stats_match(g, stats)
    k = params.k
    e_bound, v_bound = participation_thresholds(k, params.r)

    # Step 1: edges
    nbrs: List[Set[int]] = [set() for _ in range(g.n)]
    edges_removed = 0
    for u, v in g.edges():
        if stats.ep_of(u, v) >= e_bound:
            nbrs[u].add(v)
            nbrs[v].add(u)
        else:
            edges_removed += 1

    # Step 2: vertices
    alive = [vp >= v_bound for vp in stats.vp]
    step2 = 0
    for v in range(g.n):
        if not alive[v]:
            step2 += 1
            for w in nbrs[v]:
                nbrs[w].discard(v)
            nbrs[v].clear()

    # Step 3: (k-1)-core
    stack = [v for v in range(g.n) if alive[v] and len(nbrs[v]) < k - 1]
    for v in stack:
        alive[v] = False
    step3 = len(stack)
    while stack:
        v = stack.pop()
        for w in nbrs[v]:
            if alive[w]:
                nbrs[w].discard(v)
                if len(nbrs[w]) < k - 1:
                    alive[w] = False
                    stack.append(w)
                    step3 += 1
        nbrs[v].clear()

    kept = [v for v in range(g.n) if alive[v]]
    survivor = Graph.from_sets(nbrs, kept, g.labels)
    return ReductionReport(
        k=k,
        r=params.r,
        e_bound=e_bound,
        v_bound=v_bound,
        edges_removed_step1=edges_removed,
        vertices_removed_step2=step2,
        vertices_removed_step3=step3,
        survivor=survivor,
        kept=kept,
    )


def has_k_clique_prefilter(g: Graph, k: int) -> bool:
    """False means no k-clique can exist; True is inconclusive."""
    return sum(1 for d in g.degrees() if d >= k - 1) >= k


def recount_nub(
    g: Graph,
    params: ReductionParams,
    stats: Optional[CliqueStats] = None,
    threads: int = 1,
    deadline: Optional[float] = None,
) -> ReductionReport:
    """Reduce, recount on the survivor, and reduce again until nothing changes."""
    if stats is None:
        stats = count_r_cliques(g, params.r, threads=threads, deadline=deadline)
    report = k_nub(g, stats, params)
    total = report
    current = g
    while report.survivor.n and _size(report.survivor) != _size(current):
        current = report.survivor
        stats = count_r_cliques(current, params.r, threads=threads, deadline=deadline)
        report = k_nub(current, stats, params)
        say(f"   recount round {total.rounds + 1}: {current.n} -> {report.survivor.n} vertices", detail=True)
        total = replace(
            report,
            edges_removed_step1=total.edges_removed_step1 + report.edges_removed_step1,
            vertices_removed_step2=total.vertices_removed_step2 + report.vertices_removed_step2,
            vertices_removed_step3=total.vertices_removed_step3 + report.vertices_removed_step3,
            kept=[total.kept[i] for i in report.kept],
            rounds=total.rounds + 1,
        )
    return total


def _size(g: Graph) -> Tuple[int, int]:
    return g.n, g.m


def report_to_dict(report: ReductionReport, source: str = "") -> Dict[str, Any]:
    s = report.survivor
    return {
        "source": source,
        "k": report.k,
        "r": report.r,
        "e_bound": report.e_bound,
        "v_bound": report.v_bound,
        "edges_removed_step1": report.edges_removed_step1,
        "vertices_removed_step2": report.vertices_removed_step2,
        "vertices_removed_step3": report.vertices_removed_step3,
        "rounds": report.rounds,
        "survivor_order": s.n,
        "survivor_size": s.m,
        "survivor_density": float(density(s)) if s.n >= 2 else None,
        "survivor_vertices": list(s.labels),
    }
