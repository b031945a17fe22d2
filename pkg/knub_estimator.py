#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Clique-order estimation and the reduce-then-solve driver.

The driver keeps a proven interval [l, u] around the clique number:
  l  size of the best clique found so far (greedy or exact search)
  u  upper bound from the r-clique count, tightened by participation
and tests candidate orders k in (l, u] by reducing to the k-nub and looking
at what survives.
"""

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any, Dict, List, Optional

from knub_errors import BudgetExhausted, ConsistencyError, DomainError
from knub_graph import Graph, c_core, core_numbers
from knub_participation import CliqueStats, count_r_cliques
from knub_reduction import ReductionParams, k_nub, participation_thresholds, recount_nub
from knub_search import CliqueResult, SolverBudget, greedy_maximal_clique, search_clique_above
from knub_tracker import say, tracker

CASES = ("empty", "under_k", "exactly_k", "over_k")


@dataclass(frozen=True)
class Outcome:
    """
    What one k-nub says about the clique number w.
    `upper` is None for over_k: the survivor has to be searched before the
    upper bound can move.
    """
    case: str
    lower: int
    upper: Optional[int]

    @property
    def settled(self) -> bool:
        return self.upper is not None and self.lower == self.upper


@dataclass
class KSearchState:
    l: int
    k: int
    upper: int
    fact5_bound: int = 0
    refined_bound: int = 0
    witness: List[int] = field(default_factory=list)
    history: List[Dict[str, Any]] = field(default_factory=list)


# -----------------------------
# Bounds on k
# -----------------------------
def initial_k_upper(total_r_cliques: int, r: int) -> int:
    """Largest k with C(k, r) <= total; r-1 when there is no r-clique at all."""
    if r < 2:
        raise DomainError(f"r must be >= 2, got {r}")
    if total_r_cliques <= 0:
        return r - 1
    k = r
    while comb(k + 1, r) <= total_r_cliques:
        k += 1
    return k


def refine_k_by_participation(stats: CliqueStats, k: int, use_vertex_condition: bool = True) -> int:
    """
    Largest k' <= k where some edge reaches the edge bound and, unless
    `use_vertex_condition` is off, at least k' vertices reach the vertex bound.
    """
    r = stats.r
    max_ep = max(stats.ep.values(), default=0)
    vps = sorted(stats.vp, reverse=True)
    for kk in range(k, r - 1, -1):
        e_bound, v_bound = participation_thresholds(kk, r)
        if max_ep < e_bound:
            continue
        if use_vertex_condition and (len(vps) < kk or vps[kk - 1] < v_bound):
            continue
        return kk
    return r - 1


def next_k(l: int, k: int) -> int:
    if l >= k:
        raise DomainError(f"search converged: l={l} >= k={k}")
    return (l + k) // 2


def estimate_k_from_mean_participation(stats: CliqueStats, m: int) -> int:
    """
    Smallest k >= r whose edge bound is at least the mean edge participation
    plus one. A heuristic starting point, not a bound on the clique number.
    """
    r = stats.r
    if r < 3 or m == 0 or stats.total == 0:
        return r
    target = Fraction(comb(r, 2) * stats.total, m) + 1
    k = r
    while comb(k - 2, r - 2) < target:
        k += 1
    return k


def classify_outcome(survivor: Graph, k: int, l_prime: int) -> Outcome:
    """
    `l_prime` is the size of a clique found in the survivor (0 when empty).

    empty / under_k: no clique of order >= k exists, so w in [l', k-1].
    exactly_k: w = k if the survivor is complete, else w in [l', k-1].
    over_k: any clique of order >= k of the input is a clique of the
    survivor; only the lower bound moves, to l'.
    """
    if l_prime < 0 or l_prime > survivor.n:
        raise DomainError(f"clique size {l_prime} impossible in a survivor of order {survivor.n}")
    if survivor.n == 0:
        return Outcome("empty", 0, k - 1)
    if survivor.n < k:
        return Outcome("under_k", l_prime, k - 1)
    if survivor.n == k:
        if survivor.is_complete():
            return Outcome("exactly_k", k, k)
        return Outcome("exactly_k", l_prime, k - 1)
    return Outcome("over_k", l_prime, None)


# -----------------------------
# Driver
# -----------------------------
def _lift(g: Graph, sub: Graph, clique: List[int]) -> List[int]:
    index = g.label_index
    return sorted(index[sub.labels[v]] for v in clique)


def solve_with_reduction(
    g: Graph,
    r: int,
    budget: SolverBudget,
    threads: int = 1,
    stats: Optional[CliqueStats] = None,
    use_vertex_condition: bool = True,
    recount: bool = False,
    core_first: bool = False,
) -> CliqueResult:
    """
    Count r-cliques, bound the clique number from the counts, then narrow
    [l, u] by reducing to k-nubs. Returns an exact result when the bounds
    meet, otherwise an interval carrying the best witness.

    `stats`, when given, must have been counted on `g`.
    """
    if r < 2:
        raise DomainError(f"r must be >= 2, got {r}")
    started = time.monotonic()
    deadline = started + budget.max_time
    if g.n == 0:
        return CliqueResult(kind="exact", lower=0, upper=0, witness=[])

    witness = greedy_maximal_clique(g)
    l = len(witness)
    say(f"🔎 greedy lower bound: {l}", detail=True)

    work = g
    if core_first and l >= 2:
        work = c_core(g, l - 1)
        say(f"   core-first: {g.n} -> {work.n} vertices", detail=True)
        if work.n != g.n:
            stats = None
    if stats is None:
        stats = count_r_cliques(work, r, threads=threads, deadline=deadline)

    fact5 = initial_k_upper(stats.total, r)
    refined = refine_k_by_participation(stats, fact5, use_vertex_condition) if fact5 >= r else fact5
    u = min(refined, max(core_numbers(work)) + 1)
    if u < l:
        raise ConsistencyError(f"upper bound {u} below a found clique of size {l}")

    state = KSearchState(l=l, k=u, upper=u, fact5_bound=fact5, refined_bound=refined, witness=list(witness))
    say(f"📐 K{r} count {stats.total}: bound {fact5}, refined {refined}, interval [{l}, {u}]")

    k = u
    first = True
    while l < u:
        if time.monotonic() > deadline:
            tracker.add_warning("solver_budget", f"driver stopped with interval [{l}, {u}]")
            break
        if not first:
            k = next_k(l, u + 1)
        first = False
        state.k = k

        try:
            if k < r:
                sub = c_core(work, k - 1)
            elif recount:
                sub = recount_nub(work, ReductionParams(k=k, r=r), stats, threads=threads, deadline=deadline).survivor
            else:
                sub = k_nub(work, stats, ReductionParams(k=k, r=r)).survivor
        except BudgetExhausted as e:
            tracker.add_warning("solver_budget", f"recount at k={k} stopped: {e}")
            break

        found = greedy_maximal_clique(sub)
        if len(found) > l:
            l = len(found)
            witness = _lift(g, sub, found)

        outcome = classify_outcome(sub, k, len(found))
        case = outcome.case
        l = max(l, outcome.lower)
        complete = True
        if outcome.upper is not None:
            u = min(u, outcome.upper)
        else:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                complete = False
            else:
                search = search_clique_above(
                    sub,
                    floor=max(l, k - 1),
                    budget=SolverBudget(max_time=remaining, max_nodes=budget.max_nodes),
                    ceiling=u,
                    deadline=deadline,
                )
                if search.found:
                    l = len(search.clique)
                    witness = _lift(g, sub, search.clique)
                complete = search.complete
                if complete:
                    u = l if l >= k else k - 1

        state.l, state.upper, state.witness = l, u, list(witness)
        state.history.append({
            "k": k,
            "case": case,
            "survivor_order": sub.n,
            "survivor_size": sub.m,
            "lower": l,
            "upper": u,
            "elapsed": round(time.monotonic() - started, 4),
        })
        say(f"   k={k}: {case}, survivor {sub.n}/{sub.m}, interval [{l}, {u}]", detail=True)
        if not complete:
            tracker.add_warning("solver_budget", f"search at k={k} ran out of budget, interval [{l}, {u}]")
            break

    kind = "exact" if l == u else "interval"
    return CliqueResult(
        kind=kind,
        lower=l,
        upper=u,
        witness=sorted(witness),
        witness_labels=g.to_labels(witness),
        search=state,
    )
