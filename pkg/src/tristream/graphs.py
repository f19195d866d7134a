"""Immutable graphs, the brute-force triangle oracle, per-edge triangle
counts, and the two triangle-charging rules (stream order, degree order).

Everything in here is deterministic and pure; it is the ground truth that
all randomized samplers are checked against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

Edge = tuple[int, int]
Triangle = tuple[int, int, int]


class GraphError(ValueError):
    """Raised for malformed graph input (self-loop, duplicate edge, parse error)."""


def canonical_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with sorted adjacency lists.

    ``labels[i]`` is the original vertex id of internal vertex ``i`` when the
    graph was loaded from a file with non-contiguous ids.
    """

    n: int
    edges: tuple[Edge, ...]
    adj: tuple[tuple[int, ...], ...]
    labels: Optional[tuple[int, ...]] = None

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return canonical_edge(u, v) in self._edge_set

    @property
    def _edge_set(self) -> frozenset[Edge]:
        # cached lazily on first use; object.__setattr__ because frozen
        cached = self.__dict__.get("_edge_set_cache")
        if cached is None:
            cached = frozenset(self.edges)
            object.__setattr__(self, "_edge_set_cache", cached)
        return cached

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[int, int]],
        n: Optional[int] = None,
        labels: Optional[Sequence[int]] = None,
    ) -> "Graph":
        seen: set[Edge] = set()
        canon: list[Edge] = []
        max_v = -1
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            e = canonical_edge(u, v)
            if e in seen:
                raise GraphError(f"duplicate edge {e}")
            seen.add(e)
            canon.append(e)
            max_v = max(max_v, e[1])
        if n is None:
            n = max_v + 1
        elif max_v >= n:
            raise GraphError(f"vertex {max_v} out of range for n={n}")
        neigh: list[list[int]] = [[] for _ in range(n)]
        for u, v in canon:
            neigh[u].append(v)
            neigh[v].append(u)
        adj = tuple(tuple(sorted(ns)) for ns in neigh)
        return cls(
            n=n,
            edges=tuple(canon),
            adj=adj,
            labels=tuple(labels) if labels is not None else None,
        )


def load_graph(path) -> Graph:
    """Read an edge-list file: two whitespace-separated ids per line,
    '#' lines ignored. Ids are remapped to 0..n-1 in input order."""
    remap: dict[int, int] = {}
    labels: list[int] = []
    edges: list[Edge] = []

    def intern(x: int) -> int:
        if x not in remap:
            remap[x] = len(labels)
            labels.append(x)
        return remap[x]

    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphError(f"{path}:{lineno}: expected two vertex ids, got {line!r}")
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphError(f"{path}:{lineno}: non-integer vertex id in {line!r}") from None
            edges.append((intern(a), intern(b)))
    return Graph.from_edges(edges, n=len(labels), labels=labels)


def write_graph(g: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"# n={g.n} m={g.m}\n")
        for u, v in g.edges:
            fh.write(f"{u} {v}\n")


# ---------------------------------------------------------------------------
# Triangle oracle and per-edge counts


def enumerate_triangles(g: Graph) -> set[Triangle]:
    """All triangles of g, by intersecting sorted neighbor lists per edge.

    The third vertex is required to exceed max(u, v), so each triangle is
    produced exactly once.
    """
    out: set[Triangle] = set()
    for u, v in g.edges:
        lo = max(u, v)
        nu, nv = g.adj[u], g.adj[v]
        i = j = 0
        while i < len(nu) and j < len(nv):
            a, b = nu[i], nv[j]
            if a == b:
                if a > lo:
                    out.add((min(u, v), lo, a))
                i += 1
                j += 1
            elif a < b:
                i += 1
            else:
                j += 1
    return out


@dataclass(frozen=True)
class EdgeTriangleStats:
    """lam[e] is the number of triangles incident on canonical edge e."""

    lam: Mapping[Edge, int]

    def total(self) -> int:
        return sum(self.lam.values())


def triangles_per_edge(g: Graph) -> EdgeTriangleStats:
    lam: dict[Edge, int] = {e: 0 for e in g.edges}
    for a, b, c in enumerate_triangles(g):
        lam[(a, b)] += 1
        lam[(a, c)] += 1
        lam[(b, c)] += 1
    return EdgeTriangleStats(lam=lam)


# ---------------------------------------------------------------------------
# Charging rules


@dataclass(frozen=True)
class ChargeMap:
    """Assignment of each triangle to exactly one of its edges.

    ``t[e]`` counts the triangles charged to canonical edge ``e``; the sum of
    all counts equals the triangle count of the graph.
    """

    charged_edge: Mapping[Triangle, Edge]
    t: Mapping[Edge, int]


def charge_by_stream_order(g: Graph, vertex_order: Sequence[int]) -> ChargeMap:
    """Charge each triangle to the edge joining its earliest- and
    latest-exposed vertex under the given exposure order."""
    if sorted(vertex_order) != list(range(g.n)):
        raise GraphError("vertex_order is not a permutation of the vertices")
    pos = {v: i for i, v in enumerate(vertex_order)}
    charged: dict[Triangle, Edge] = {}
    t: dict[Edge, int] = {}
    for tri in enumerate_triangles(g):
        first = min(tri, key=pos.__getitem__)
        last = max(tri, key=pos.__getitem__)
        e = canonical_edge(first, last)
        charged[tri] = e
        t[e] = t.get(e, 0) + 1
    return ChargeMap(charged_edge=charged, t=t)


def degree_order_key(g: Graph):
    """Total order on vertices: ascending (degree, vertex id)."""
    return lambda v: (g.degree(v), v)


def charge_by_degree_order(g: Graph) -> ChargeMap:
    """Charge each triangle to the edge joining its two smallest vertices
    under the ascending (degree, id) order."""
    key = degree_order_key(g)
    charged: dict[Triangle, Edge] = {}
    t: dict[Edge, int] = {}
    for tri in enumerate_triangles(g):
        a, b, _ = sorted(tri, key=key)
        e = canonical_edge(a, b)
        charged[tri] = e
        t[e] = t.get(e, 0) + 1
    return ChargeMap(charged_edge=charged, t=t)


# ---------------------------------------------------------------------------
# Heavy/light classification by incident-triangle count


@dataclass(frozen=True)
class TauClassification:
    tau: float
    heavy_edges: frozenset[Edge]
    light_count_per_triangle: Mapping[Triangle, int]


def classify_tau(g: Graph, stats: EdgeTriangleStats, tau: float) -> TauClassification:
    """Split edges at threshold tau on incident-triangle count; for each
    triangle record how many of its three edges fall below the threshold."""
    if tau < 1:
        raise ValueError(f"tau must be >= 1, got {tau}")
    heavy = frozenset(e for e, lam in stats.lam.items() if lam >= tau)
    light_count: dict[Triangle, int] = {}
    for tri in enumerate_triangles(g):
        a, b, c = tri
        tri_edges = ((a, b), (a, c), (b, c))
        light_count[tri] = sum(1 for e in tri_edges if e not in heavy)
    return TauClassification(tau=tau, heavy_edges=heavy, light_count_per_triangle=light_count)


# ---------------------------------------------------------------------------
# Generators (used by the CLI and the test harness)


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise GraphError(f"need n >= 1, got {n}")
    return Graph.from_edges(
        [(u, v) for u in range(n) for v in range(u + 1, n)], n=n
    )


def gnp_graph(n: int, p: float, rng) -> Graph:
    if n < 1 or not (0.0 <= p <= 1.0):
        raise GraphError(f"bad G(n,p) parameters n={n} p={p}")
    edges = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < p
    ]
    return Graph.from_edges(edges, n=n)


def planted_graph(n: int, p: float, k: int, rng) -> Graph:
    """G(n, p) plus a complete graph on k fresh vertices."""
    if k < 1:
        raise GraphError(f"need k >= 1, got {k}")
    base = gnp_graph(n, p, rng)
    edges = list(base.edges)
    edges.extend((n + u, n + v) for u in range(k) for v in range(u + 1, k))
    return Graph.from_edges(edges, n=n + k)
