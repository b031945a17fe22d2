#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Simple undirected graphs: ingestion (SNAP edge lists, MatrixMarket), density,
and core decomposition.

Vertices are always the contiguous ids 0..n-1. The external id each vertex had
in its source file is kept in `labels`, and induced subgraphs carry their
parent's labels, so a vertex can be traced back to the input file from any
depth of reduction.
"""

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from knub_errors import DomainError, GraphParseError

FORMATS = ("snap", "mtx")


@dataclass(frozen=True)
class Graph:
    n: int
    m: int
    adjacency: Tuple[Tuple[int, ...], ...]
    labels: Tuple[int, ...]

    # -----------------------------
    # Construction
    # -----------------------------
    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]], labels: Optional[Sequence[int]] = None) -> "Graph":
        """Build from internal-id pairs; duplicates collapse and self-loops are dropped."""
        nbrs: List[Set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                continue
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u},{v}) out of range for n={n}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls.from_sets(nbrs, range(n), labels if labels is not None else range(n))

    @classmethod
    def from_sets(cls, nbrs: Sequence[Set[int]], keep: Iterable[int], labels: Sequence[int]) -> "Graph":
        """
        Build the graph on `keep` from mutable neighbor sets (as left behind by a
        peeling pass). Neighbor sets must only mention kept vertices.
        """
        keep = sorted(keep)
        pos = {v: i for i, v in enumerate(keep)}
        adjacency = tuple(tuple(sorted(pos[w] for w in nbrs[v])) for v in keep)
        m = sum(len(a) for a in adjacency) // 2
        return cls(n=len(keep), m=m, adjacency=adjacency, labels=tuple(labels[v] for v in keep))

    @classmethod
    def empty(cls) -> "Graph":
        return cls(n=0, m=0, adjacency=(), labels=())

    # -----------------------------
    # Queries
    # -----------------------------
    @cached_property
    def neighbor_sets(self) -> Tuple[FrozenSet[int], ...]:
        return tuple(frozenset(a) for a in self.adjacency)

    @cached_property
    def bitsets(self) -> Tuple[int, ...]:
        out = []
        for row in self.adjacency:
            b = 0
            for w in row:
                b |= 1 << w
            out.append(b)
        return tuple(out)

    @cached_property
    def label_index(self) -> Dict[int, int]:
        return {lab: v for v, lab in enumerate(self.labels)}

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> List[int]:
        return [len(a) for a in self.adjacency]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbor_sets[u]

    def edges(self) -> Iterator[Tuple[int, int]]:
        """Edges (u, v) with u < v, in ascending order."""
        for u, row in enumerate(self.adjacency):
            for v in row:
                if v > u:
                    yield u, v

    def is_complete(self) -> bool:
        return self.m * 2 == self.n * (self.n - 1)

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        sets = self.neighbor_sets
        return all(vs[j] in sets[vs[i]] for i in range(len(vs)) for j in range(i + 1, len(vs)))

    def induced(self, vertices: Iterable[int]) -> "Graph":
        keep = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(keep)}
        adjacency = tuple(tuple(pos[w] for w in self.adjacency[v] if w in pos) for v in keep)
        m = sum(len(a) for a in adjacency) // 2
        return Graph(n=len(keep), m=m, adjacency=adjacency, labels=tuple(self.labels[v] for v in keep))

    def to_labels(self, vertices: Iterable[int]) -> List[int]:
        return sorted(self.labels[v] for v in vertices)


# -----------------------------
# Parsing
# -----------------------------
def _decode(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise GraphParseError(f"input is not UTF-8 ({e.reason})")


def _parse_pair(raw: str, line_no: int) -> Tuple[int, int]:
    parts = raw.replace(",", " ").split()
    if len(parts) < 2:
        raise GraphParseError(f"expected a vertex pair, got {raw.strip()!r}", line_no)
    try:
        u, v = int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphParseError(f"vertex ids must be integers, got {raw.strip()!r}", line_no)
    if u < 0 or v < 0:
        raise GraphParseError(f"negative vertex id in {raw.strip()!r}", line_no)
    return u, v


def _parse_snap(text: str) -> Graph:
    ids: Set[int] = set()
    pairs: List[Tuple[int, int]] = []
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "#%":
            continue
        u, v = _parse_pair(line, line_no)
        ids.add(u)
        ids.add(v)
        if u != v:
            pairs.append((u, v))
    if not pairs:
        raise GraphParseError("no edges in input")
    labels = sorted(ids)
    index = {lab: i for i, lab in enumerate(labels)}
    return Graph.from_edges(len(labels), ((index[u], index[v]) for u, v in pairs), labels)


def _parse_mtx(text: str) -> Graph:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("%%MatrixMarket"):
        raise GraphParseError("missing %%MatrixMarket header", 1)
    header = lines[0].lower().split()
    if "coordinate" not in header:
        raise GraphParseError("only coordinate MatrixMarket files hold edge lists", 1)

    n: Optional[int] = None
    pairs: List[Tuple[int, int]] = []
    for line_no, raw in enumerate(lines[1:], 2):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if n is None:
            parts = line.split()
            if len(parts) != 3:
                raise GraphParseError(f"expected 'rows cols entries' size line, got {line!r}", line_no)
            try:
                rows, cols, _ = (int(x) for x in parts)
            except ValueError:
                raise GraphParseError(f"size line must hold integers, got {line!r}", line_no)
            n = max(rows, cols)
            continue
        u, v = _parse_pair(line, line_no)
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphParseError(f"entry ({u},{v}) outside 1..{n}", line_no)
        if u != v:
            pairs.append((u - 1, v - 1))
    if n is None:
        raise GraphParseError("missing size line")
    if not pairs:
        raise GraphParseError("no edges in input")
    return Graph.from_edges(n, pairs, range(1, n + 1))


def parse_edge_list(data: bytes, fmt: str = "snap") -> Graph:
    """
    Parse a SNAP-style edge list ("snap") or a MatrixMarket coordinate file ("mtx").

    snap: whitespace (or comma) separated integer pairs, `#`/`%` comment lines,
    extra columns ignored. External ids are remapped to 0..n-1 in ascending
    order and kept as labels.
    mtx: header, size line, then 1-based pairs; n comes from the size line so
    isolated vertices survive.
    """
    text = _decode(data)
    if fmt in ("snap", "snap-txt"):
        return _parse_snap(text)
    if fmt == "mtx":
        return _parse_mtx(text)
    raise DomainError(f"unknown format {fmt!r}, expected one of {FORMATS}")


def guess_format(path: str) -> str:
    return "mtx" if path.lower().endswith(".mtx") else "snap"


def read_graph(path: str, fmt: Optional[str] = None) -> Graph:
    with open(path, "rb") as f:
        data = f.read()
    return parse_edge_list(data, fmt or guess_format(path))


def graph_fingerprint(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def write_snap(g: Graph, source: str = "") -> str:
    lines = [f"# n: {g.n}", f"# m: {g.m}", f"# source: {source}"]
    lab = g.labels
    lines.extend(f"{lab[u]} {lab[v]}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


# -----------------------------
# Density and cores
# -----------------------------
def density(g: Graph) -> Fraction:
    if g.n < 2:
        raise DomainError(f"density needs at least 2 vertices, got n={g.n}")
    return Fraction(2 * g.m, g.n * g.n - g.n)


def c_core(g: Graph, c: int) -> Graph:
    """Maximal induced subgraph with minimum degree >= c (possibly disconnected or empty)."""
    deg = g.degrees()
    alive = [True] * g.n
    stack = [v for v in range(g.n) if deg[v] < c]
    for v in stack:
        alive[v] = False
    adjacency = g.adjacency
    while stack:
        v = stack.pop()
        for w in adjacency[v]:
            if alive[w]:
                deg[w] -= 1
                if deg[w] < c:
                    alive[w] = False
                    stack.append(w)
    return g.induced(v for v in range(g.n) if alive[v])


def _bucket_peel(g: Graph) -> Tuple[List[int], List[int]]:
    # Batagelj-Zaversnik: vertices kept sorted by current degree in `vert`,
    # `bins[d]` is where degree-d vertices start.
    n = g.n
    deg = g.degrees()
    md = max(deg, default=0)
    bins = [0] * (md + 1)
    for d in deg:
        bins[d] += 1
    start = 0
    for d in range(md + 1):
        num = bins[d]
        bins[d] = start
        start += num
    pos = [0] * n
    vert = [0] * n
    for v in range(n):
        pos[v] = bins[deg[v]]
        vert[pos[v]] = v
        bins[deg[v]] += 1
    for d in range(md, 0, -1):
        bins[d] = bins[d - 1]
    if md >= 0 and n:
        bins[0] = 0

    adjacency = g.adjacency
    for i in range(n):
        v = vert[i]
        dv = deg[v]
        for u in adjacency[v]:
            du = deg[u]
            if du > dv:
                pu = pos[u]
                pw = bins[du]
                w = vert[pw]
                if u != w:
                    pos[u] = pw
                    vert[pu] = w
                    pos[w] = pu
                    vert[pw] = u
                bins[du] += 1
                deg[u] = du - 1
    return deg, vert


def core_numbers(g: Graph) -> List[int]:
    return _bucket_peel(g)[0]


def degeneracy_order(g: Graph) -> List[int]:
    """Vertices in the order a minimum-degree peel removes them."""
    return _bucket_peel(g)[1]


def main_core(g: Graph) -> Graph:
    if g.n == 0:
        return Graph.empty()
    core = core_numbers(g)
    cmax = max(core)
    return g.induced(v for v in range(g.n) if core[v] >= cmax)
