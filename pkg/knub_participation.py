#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
r-clique counting with per-vertex (VP) and per-edge (EP) participation.

For an edge {u,v}, EP_r is the number of (r-2)-cliques inside N(u) ∩ N(v).
Vertex participation and the total follow from the edge counts:
    VP_r(v) = sum of EP_r over edges at v, divided by (r-1)
    total   = sum of all EP_r, divided by C(r,2)
so only the per-edge recursion is needed, and it splits cleanly over edges.
"""

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from knub_errors import BudgetExhausted, ConsistencyError, DomainError
from knub_graph import Graph, degeneracy_order
from knub_tracker import say

Edge = Tuple[int, int]

# deadline is checked once per this many edges
CHECK_EVERY = 2048


@dataclass
class CliqueStats:
    r: int
    total: int
    vp: List[int]
    ep: Dict[Edge, int] = field(default_factory=dict)

    def ep_of(self, u: int, v: int) -> int:
        return self.ep.get((u, v) if u < v else (v, u), 0)


# -----------------------------
# Counting kernel
# -----------------------------
def _count_cliques(cand: int, j: int, nb: Sequence[int]) -> int:
    """Number of j-cliques inside the bitset `cand`."""
    if j == 0:
        return 1
    if j == 1:
        return cand.bit_count()
    if cand.bit_count() < j:
        return 0
    total = 0
    while cand:
        low = cand & -cand
        idx = low.bit_length() - 1
        cand ^= low
        if j == 2:
            total += (nb[idx] & cand).bit_count()
        else:
            total += _count_cliques(nb[idx] & cand, j - 1, nb)
    return total


def _count_chunk(chunk: Sequence[Tuple[int, int]], j: int, nb: Sequence[int], deadline: Optional[float]) -> List[int]:
    out = []
    for i, (ru, rv) in enumerate(chunk):
        if deadline is not None and i % CHECK_EVERY == 0 and time.monotonic() > deadline:
            raise BudgetExhausted("r-clique counting passed its deadline")
        out.append(_count_cliques(nb[ru] & nb[rv], j, nb))
    return out


# worker-process state, set once per worker by the pool initializer
_WORKER_NB: Sequence[int] = ()


def _init_worker(nb: Sequence[int]) -> None:
    global _WORKER_NB
    _WORKER_NB = nb


def _count_chunk_in_worker(chunk: Sequence[Tuple[int, int]], j: int, deadline: Optional[float]) -> List[int]:
    return _count_chunk(chunk, j, _WORKER_NB, deadline)


def _rank_bitsets(g: Graph) -> Tuple[List[int], List[int]]:
    order = degeneracy_order(g)
    rank = [0] * g.n
    for i, v in enumerate(order):
        rank[v] = i
    nb = [0] * g.n
    for v in range(g.n):
        b = 0
        for w in g.adjacency[v]:
            b |= 1 << rank[w]
        nb[rank[v]] = b
    return rank, nb


def count_r_cliques(g: Graph, r: int, threads: int = 1, deadline: Optional[float] = None) -> CliqueStats:
    """
    Exact r-clique count with VP and EP maps.

    threads > 1 splits the edges into chunks handled by a process pool; the
    chunk results are merged in chunk order so the result does not depend on
    the number of workers. `deadline` is a time.monotonic() value.
    """
    if r < 2:
        raise DomainError(f"r must be >= 2, got {r}")
    if r == 2:
        return CliqueStats(r=2, total=g.m, vp=g.degrees(), ep={e: 1 for e in g.edges()})

    edges = list(g.edges())
    rank, nb = _rank_bitsets(g)
    ranked = [(rank[u], rank[v]) for u, v in edges]
    j = r - 2

    if threads > 1 and len(ranked) > CHECK_EVERY:
        size = max(CHECK_EVERY, -(-len(ranked) // (threads * 4)))
        chunks = [ranked[i:i + size] for i in range(0, len(ranked), size)]
        say(f"   counting K{r} over {len(edges)} edges in {len(chunks)} chunks ({threads} workers)", detail=True)
        with ProcessPoolExecutor(max_workers=threads, initializer=_init_worker, initargs=(nb,)) as pool:
            futures = [pool.submit(_count_chunk_in_worker, c, j, deadline) for c in chunks]
            counts: List[int] = []
            for fut in futures:
                counts.extend(fut.result())
    else:
        counts = _count_chunk(ranked, j, nb, deadline)

    ep: Dict[Edge, int] = {}
    vp_edges = [0] * g.n
    edge_sum = 0
    for (u, v), c in zip(edges, counts):
        if c:
            ep[(u, v)] = c
            vp_edges[u] += c
            vp_edges[v] += c
            edge_sum += c

    vp = [x // (r - 1) for x in vp_edges]
    return CliqueStats(r=r, total=edge_sum // comb(r, 2), vp=vp, ep=ep)


# -----------------------------
# Summaries and checks
# -----------------------------
def max_participation(stats: CliqueStats) -> Tuple[int, int]:
    return max(stats.vp, default=0), max(stats.ep.values(), default=0)


def check_handshake(stats: CliqueStats) -> bool:
    return (sum(stats.vp) == stats.r * stats.total
            and sum(stats.ep.values()) == comb(stats.r, 2) * stats.total)


def check_stats_match(g: Graph, stats: CliqueStats) -> None:
    """Raise ConsistencyError when `stats` cannot have been counted on `g`."""
    if len(stats.vp) != g.n:
        raise ConsistencyError(f"stats cover {len(stats.vp)} vertices, graph has {g.n}")
    sets = g.neighbor_sets
    for (u, v) in stats.ep:
        if not (0 <= u < g.n and 0 <= v < g.n) or v not in sets[u]:
            raise ConsistencyError(f"stats mention edge ({u},{v}) that is not in the graph")


# -----------------------------
# Persistence
# -----------------------------
def stats_to_dict(stats: CliqueStats, g: Optional[Graph] = None, graph_sha256: Optional[str] = None) -> Dict:
    return {
        "r": stats.r,
        "total": stats.total,
        "n": len(stats.vp),
        "m": g.m if g is not None else None,
        "graph_sha256": graph_sha256,
        "vp": stats.vp,
        "ep": [[u, v, c] for (u, v), c in sorted(stats.ep.items())],
    }


def save_stats(path: str, stats: CliqueStats, g: Optional[Graph] = None, graph_sha256: Optional[str] = None) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(stats_to_dict(stats, g, graph_sha256), f)


def load_stats(path: str, g: Optional[Graph] = None, graph_sha256: Optional[str] = None) -> CliqueStats:
    with open(path, "r", encoding="utf-8") as f:
        raw = json.load(f)
    try:
        stats = CliqueStats(
            r=int(raw["r"]),
            total=int(raw["total"]),
            vp=[int(x) for x in raw["vp"]],
            ep={(int(u), int(v)): int(c) for u, v, c in raw["ep"]},
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ConsistencyError(f"malformed stats file {path}: {e}")

    saved_sha = raw.get("graph_sha256")
    if graph_sha256 and saved_sha and saved_sha != graph_sha256:
        raise ConsistencyError(f"stats file {path} was counted on a different graph")
    if g is not None:
        check_stats_match(g, stats)
    return stats
