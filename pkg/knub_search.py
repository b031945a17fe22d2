#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Clique search: bitset colour-sort branch and bound, the greedy maximal-clique
routine, and a brute-force oracle for small graphs.
"""

import time
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from knub_errors import DomainError, OracleRefused
from knub_graph import Graph, core_numbers, degeneracy_order

ORACLE_MAX_N = 30

# budget is checked once per this many search nodes
NODE_CHECK = 256


@dataclass(frozen=True)
class SolverBudget:
    max_time: float = 600.0
    max_nodes: int = 50_000_000

    def __post_init__(self):
        if self.max_time <= 0 or self.max_nodes <= 0:
            raise DomainError(f"solver budget must be positive, got {self}")


@dataclass
class CliqueResult:
    kind: str  # exact | maximal | interval
    lower: int
    upper: int
    witness: List[int]
    witness_labels: List[int] = field(default_factory=list)
    nodes: int = 0
    search: Optional[Any] = None

    def is_exact(self) -> bool:
        return self.kind == "exact"

    def to_dict(self) -> Dict[str, Any]:
        out = {
            "kind": self.kind,
            "lower": self.lower,
            "upper": self.upper,
            "witness": self.witness_labels or self.witness,
            "nodes": self.nodes,
        }
        if self.search is not None:
            out["search"] = asdict(self.search)
        return out


@dataclass
class SearchOutcome:
    clique: List[int]
    complete: bool
    nodes: int

    @property
    def found(self) -> bool:
        return bool(self.clique)


# -----------------------------
# Bit helpers
# -----------------------------
def _lsb_index(x: int) -> int:
    return (x & -x).bit_length() - 1


def _bits_to_list(bits: int) -> List[int]:
    out = []
    while bits:
        out.append(_lsb_index(bits))
        bits &= bits - 1
    return out


def _color_sort(p: int, adj: Sequence[int]) -> Tuple[List[int], List[int]]:
    order: List[int] = []
    colors: List[int] = []
    color = 0
    while p:
        color += 1
        q = p
        this_color = 0
        while q:
            v = _lsb_index(q)
            bit = 1 << v
            order.append(v)
            colors.append(color)
            this_color |= bit
            q &= ~bit
            q &= ~adj[v]
        p &= ~this_color
    return order, colors


# -----------------------------
# Branch and bound
# -----------------------------
class _Stop(Exception):
    pass


class _CeilingReached(Exception):
    pass


class _BranchAndBound:
    """
    MCQ-style search in degeneracy-rank space: colour classes bound the clique
    still reachable from a node, and branching starts from the highest colour.
    """

    def __init__(self, g: Graph, budget: SolverBudget, deadline: Optional[float] = None):
        self.g = g
        self.budget = budget
        self.deadline = time.monotonic() + budget.max_time
        if deadline is not None:
            self.deadline = min(self.deadline, deadline)
        self.core = core_numbers(g)

        order = degeneracy_order(g)
        self.vertex_of = order
        rank = [0] * g.n
        for i, v in enumerate(order):
            rank[v] = i
        adj = [0] * g.n
        for v in range(g.n):
            b = 0
            for w in g.adjacency[v]:
                b |= 1 << rank[w]
            adj[rank[v]] = b
        self.rank = rank
        self.adj = adj

        self.best_size = 0
        self.best_bits = 0
        self.ceiling = g.n
        self.nodes = 0

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes % NODE_CHECK == 0:
            if self.nodes >= self.budget.max_nodes or time.monotonic() > self.deadline:
                raise _Stop

    def _improve(self, size: int, bits: int) -> None:
        self.best_size = size
        self.best_bits = bits
        if size >= self.ceiling:
            raise _CeilingReached

    def search(self, floor: int, ceiling: Optional[int] = None) -> SearchOutcome:
        """Look for a clique larger than `floor`; stop as soon as one of size `ceiling` turns up."""
        self.best_size = floor
        self.best_bits = 0
        self.ceiling = self.g.n if ceiling is None else ceiling
        if floor >= self.ceiling:
            return SearchOutcome(clique=[], complete=True, nodes=0)

        # a clique larger than floor lives inside the floor-core
        p = 0
        for v in range(self.g.n):
            if self.core[v] >= floor:
                p |= 1 << self.rank[v]
        try:
            self._expand(0, 0, p)
            complete = True
        except _CeilingReached:
            complete = True
        except _Stop:
            complete = False

        clique = sorted(self.vertex_of[i] for i in _bits_to_list(self.best_bits))
        return SearchOutcome(clique=clique, complete=complete, nodes=self.nodes)

    def _expand(self, size: int, r_bits: int, p_bits: int) -> None:
        order, colors = _color_sort(p_bits, self.adj)
        p_local = p_bits
        for i in range(len(order) - 1, -1, -1):
            if size + colors[i] <= self.best_size:
                break
            v = order[i]
            bit = 1 << v
            self._tick()
            r2 = r_bits | bit
            p2 = p_local & self.adj[v]
            if p2 == 0:
                if size + 1 > self.best_size:
                    self._improve(size + 1, r2)
            else:
                self._expand(size + 1, r2, p2)
            p_local &= ~bit


def search_clique_above(
    g: Graph,
    floor: int,
    budget: SolverBudget,
    ceiling: Optional[int] = None,
    deadline: Optional[float] = None,
) -> SearchOutcome:
    """
    Best clique of size > floor, or an empty clique if none exists.

    complete=False means the budget ran out first; the clique returned is
    then only the best seen so far (possibly none).
    """
    if g.n == 0:
        return SearchOutcome(clique=[], complete=True, nodes=0)
    return _BranchAndBound(g, budget, deadline).search(floor, ceiling)


def max_clique_exact(g: Graph, budget: SolverBudget, deadline: Optional[float] = None) -> CliqueResult:
    if g.n == 0:
        return CliqueResult(kind="exact", lower=0, upper=0, witness=[])

    greedy = greedy_maximal_clique(g)
    degeneracy_bound = min(g.n, max(core_numbers(g)) + 1)
    outcome = search_clique_above(g, len(greedy), budget, ceiling=degeneracy_bound, deadline=deadline)
    witness = outcome.clique if outcome.found else greedy

    if outcome.complete:
        return CliqueResult(kind="exact", lower=len(witness), upper=len(witness), witness=witness,
                            witness_labels=g.to_labels(witness), nodes=outcome.nodes)
    return CliqueResult(kind="maximal", lower=len(witness), upper=degeneracy_bound, witness=witness,
                        witness_labels=g.to_labels(witness), nodes=outcome.nodes)


# -----------------------------
# Greedy
# -----------------------------
def _extend(g: Graph, clique: List[int]) -> List[int]:
    # scan common neighbours in ascending id, adding each one adjacent to all of S
    bits = g.bitsets
    cand = (1 << g.n) - 1
    for v in clique:
        cand &= bits[v]
    out = list(clique)
    while cand:
        w = _lsb_index(cand)
        out.append(w)
        cand &= bits[w]
    return sorted(out)


def greedy_maximal_clique(g: Graph, seed: Optional[Sequence[int]] = None) -> List[int]:
    """
    Grow a clique from every start vertex whose degree could still beat the
    best so far, and keep the largest. The result is always maximal.
    """
    if g.n == 0:
        return []
    best: List[int] = []
    if seed:
        if not g.is_clique(seed):
            raise DomainError("greedy seed is not a clique")
        best = _extend(g, sorted(set(seed)))

    for v in range(g.n):
        if g.degree(v) < len(best):
            continue
        s = _extend(g, [v])
        if len(s) > len(best):
            best = s
    return best


# -----------------------------
# Oracle
# -----------------------------
def brute_force_max_clique(g: Graph) -> Tuple[int, List[int]]:
    """Exhaustive clique enumeration for graphs with at most 30 vertices."""
    if g.n > ORACLE_MAX_N:
        raise OracleRefused(f"oracle limited to n <= {ORACLE_MAX_N}, got n={g.n}")
    if g.n == 0:
        return 0, []

    bits = g.bitsets
    best: List[int] = []

    def grow(clique: List[int], cand: int) -> None:
        nonlocal best
        if len(clique) > len(best):
            best = list(clique)
        if len(clique) + cand.bit_count() <= len(best):
            return
        while cand:
            v = _lsb_index(cand)
            cand &= cand - 1
            clique.append(v)
            grow(clique, cand & bits[v])
            clique.pop()

    grow([], (1 << g.n) - 1)
    return len(best), sorted(best)
