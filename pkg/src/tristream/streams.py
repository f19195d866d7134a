"""Materialized arrival streams for the three models.

EA: each edge once, in a (seeded) random order.
VA: vertices exposed in random order; each edge arrives in the block of its
    later-exposed endpoint.
AL: vertices exposed in random order; each vertex's block contains all its
    incident edges, so every edge arrives twice.

Items are plain tuples: ("V", v) for a vertex exposure, ("E", u, v) for an
edge arrival with u the currently exposed endpoint (for AL/VA).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .graphs import Graph, canonical_edge

EA = "EA"
VA = "VA"
AL = "AL"

Item = tuple


class StreamError(ValueError):
    """Raised for malformed stream files or model mismatches."""


@dataclass(frozen=True)
class Stream:
    model: str
    items: tuple[Item, ...]
    vertex_order: Optional[tuple[int, ...]] = None

    def edge_items(self):
        return [it for it in self.items if it[0] == "E"]


def make_ea_stream(g: Graph, rng, edge_order: Optional[Sequence[int]] = None) -> Stream:
    """Uniformly random permutation of the edges (or a forced order of edge
    indices for adversarial tests)."""
    if edge_order is None:
        perm = rng.permutation(g.m) if g.m else []
    else:
        perm = edge_order
    items = tuple(("E",) + g.edges[i] for i in perm)
    return Stream(model=EA, items=items)


def _vertex_perm(g: Graph, rng, vertex_order):
    if vertex_order is None:
        return [int(v) for v in rng.permutation(g.n)]
    if sorted(vertex_order) != list(range(g.n)):
        raise StreamError("vertex_order is not a permutation")
    return list(vertex_order)


def make_al_stream(
    g: Graph, rng, vertex_order: Optional[Sequence[int]] = None, shuffle_blocks: bool = True
) -> Stream:
    """Adjacency-list stream: every edge appears once in each endpoint's block."""
    order = _vertex_perm(g, rng, vertex_order)
    items: list[Item] = []
    for v in order:
        items.append(("V", v))
        block = list(g.adj[v])
        if shuffle_blocks and len(block) > 1:
            block = [block[i] for i in rng.permutation(len(block))]
        items.extend(("E", v, u) for u in block)
    return Stream(model=AL, items=tuple(items), vertex_order=tuple(order))


def make_va_stream(
    g: Graph, rng, vertex_order: Optional[Sequence[int]] = None, shuffle_blocks: bool = True
) -> Stream:
    """Vertex-arrival stream: edge {u,v} arrives in the later endpoint's block."""
    order = _vertex_perm(g, rng, vertex_order)
    exposed: set[int] = set()
    items: list[Item] = []
    for v in order:
        items.append(("V", v))
        block = [u for u in g.adj[v] if u in exposed]
        if shuffle_blocks and len(block) > 1:
            block = [block[i] for i in rng.permutation(len(block))]
        items.extend(("E", v, u) for u in block)
        exposed.add(v)
    return Stream(model=VA, items=tuple(items), vertex_order=tuple(order))


def validate_stream(s: Stream, g: Graph) -> Optional[str]:
    """Check the per-model invariants against g; returns the first violation
    as a string, or None when the stream is valid."""
    expected_copies = 2 if s.model == AL else 1
    counts: dict = {e: 0 for e in g.edges}
    exposed: list[int] = []
    exposed_set: set[int] = set()
    current: Optional[int] = None
    for it in s.items:
        if it[0] == "V":
            v = it[1]
            if v in exposed_set:
                return f"vertex {v} exposed twice"
            if not (0 <= v < g.n):
                return f"unknown vertex {v}"
            exposed.append(v)
            exposed_set.add(v)
            current = v
        elif it[0] == "E":
            u, v = it[1], it[2]
            e = canonical_edge(u, v)
            if e not in counts:
                return f"unknown edge {e}"
            counts[e] += 1
            if s.model in (AL, VA):
                if current is None or u != current:
                    return f"edge {e} arrived outside the block of its exposing endpoint"
                if s.model == VA and v not in exposed_set:
                    return f"VA edge {e} arrived before endpoint {v} was exposed"
        else:
            return f"unknown item kind {it[0]!r}"
    if s.model in (AL, VA) and len(exposed) != g.n:
        return f"{len(exposed)} vertices exposed, expected {g.n}"
    for e, c in counts.items():
        if c != expected_copies:
            return f"edge {e} appeared {c} time(s), expected {expected_copies}"
    return None


# ---------------------------------------------------------------------------
# File format: header "# model=<M> n=<n> m=<m>", then one item per line.


def write_stream(s: Stream, path, n: int, m: int) -> None:
    with open(path, "w") as fh:
        fh.write(f"# model={s.model} n={n} m={m}\n")
        for it in s.items:
            if it[0] == "V":
                fh.write(f"V {it[1]}\n")
            else:
                fh.write(f"E {it[1]} {it[2]}\n")


def read_stream(path) -> Stream:
    model = None
    items: list[Item] = []
    order: list[int] = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    if tok.startswith("model="):
                        model = tok.split("=", 1)[1]
                continue
            parts = line.split()
            if parts[0] == "V" and len(parts) == 2:
                v = int(parts[1])
                items.append(("V", v))
                order.append(v)
            elif parts[0] == "E" and len(parts) == 3:
                items.append(("E", int(parts[1]), int(parts[2])))
            else:
                raise StreamError(f"{path}:{lineno}: bad stream line {line!r}")
    if model not in (EA, VA, AL):
        raise StreamError(f"{path}: missing or unknown model header")
    return Stream(
        model=model,
        items=tuple(items),
        vertex_order=tuple(order) if order else None,
    )


# ---------------------------------------------------------------------------
# Pass-counting cursor factory


class StreamFactory:
    """Hands out one-way cursors over a fixed stream and counts how many
    passes have been consumed. Algorithms must never seek backward; they only
    ever receive a fresh forward iterator per pass."""

    def __init__(self, stream: Stream):
        self.stream = stream
        self.passes = 0

    @property
    def model(self) -> str:
        return self.stream.model

    def cursor(self):
        self.passes += 1
        return iter(self.stream.items)
