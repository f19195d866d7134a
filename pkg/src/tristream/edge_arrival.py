"""Edge-arrival (and vertex-arrival) triangle samplers.

One-pass: two with-replacement reservoir slots over the edges; a triangle is
recorded when the arriving edge closes the wedge currently held in the slots,
and dropped again whenever a slot is replaced. Per triangle the output
probability is 2/m^2 under this two-slot convention, identical across
triangles, so the conditional output distribution is exactly uniform.

Three-pass: sample two uniform edges, then pick the third vertex either as a
uniform neighbor of the lower-ordered endpoint (when its degree is small) or
degree-proportionally via the second sampled edge (when it is large); accept
with the matching probability so that every triangle is output with
probability 1/(sqrt(2) m^{3/2}).

Vertices are ordered by ascending (degree, id); "small degree" means
deg(u)^2 <= 2m, compared exactly in integers.
"""
from __future__ import annotations

import math
from typing import Optional

from .graphs import Edge, Triangle, canonical_edge
from .results import SampleResult, SpaceStats, SpaceTracker
from .sampling import SingleSlot, bernoulli
from .streams import AL, StreamFactory


class ModelError(ValueError):
    """Algorithm fed a stream from an incompatible model."""


def _require_ea(factory: StreamFactory) -> None:
    if factory.model == AL:
        raise ModelError(
            "edge-arrival algorithms reject AL streams: each edge arrives "
            "twice there, which changes the reservoir marginals"
        )


def _wedge_completion(e1: Edge, e2: Edge) -> Optional[Edge]:
    """If e1 and e2 share exactly one vertex, the edge that would close the
    triangle; otherwise None."""
    a, b = e1
    c, d = e2
    if a == c and b != d:
        return canonical_edge(b, d)
    if a == d and b != c:
        return canonical_edge(b, c)
    if b == c and a != d:
        return canonical_edge(a, d)
    if b == d and a != c:
        return canonical_edge(a, c)
    return None


class EA1Instance:
    """One instance of the 1-pass sampler: two independent single-slot edge
    reservoirs plus at most one recorded triangle."""

    __slots__ = ("slot1", "slot2", "offers", "triangle", "_closing")

    def __init__(self):
        self.slot1: Optional[Edge] = None
        self.slot2: Optional[Edge] = None
        self.offers = 0
        self.triangle: Optional[Triangle] = None
        self._closing: Optional[Edge] = None  # edge that completes the held wedge

    def feed(self, e: Edge, rng) -> None:
        self.offers += 1
        c = self.offers
        took = False
        if c == 1:
            self.slot1 = e
            self.slot2 = e
            took = True
        else:
            if rng.random() * c < 1.0:
                self.slot1 = e
                took = True
            if rng.random() * c < 1.0:
                self.slot2 = e
                took = True
        if took:
            self.triangle = None
            self._closing = _wedge_completion(self.slot1, self.slot2)
        elif self._closing is not None and e == self._closing:
            a, b = self.slot1
            c2, d2 = self.slot2
            self.triangle = tuple(sorted({a, b, c2, d2}))  # type: ignore[assignment]

    @property
    def stored_items(self) -> int:
        return 2 + (1 if self.triangle is not None else 0)


def ea1_instance(cursor, rng) -> Optional[Triangle]:
    """Run a single 1-pass instance over an EA/VA cursor."""
    inst = EA1Instance()
    for it in cursor:
        if it[0] == "E":
            inst.feed(canonical_edge(it[1], it[2]), rng)
    return inst.triangle


def ea1_run(factory: StreamFactory, instances: int, rng) -> SampleResult:
    """t interleaved instances over one shared pass; first success wins."""
    if instances < 1:
        raise ValueError(f"need at least one instance, got {instances}")
    _require_ea(factory)
    insts = [EA1Instance() for _ in range(instances)]
    tracker = SpaceTracker()
    for it in factory.cursor():
        if it[0] != "E":
            continue
        e = canonical_edge(it[1], it[2])
        for inst in insts:
            inst.feed(e, rng)
    tracker.observe(
        edges=2 * instances,
        triangles=sum(1 for i in insts if i.triangle is not None),
    )
    tri = next((i.triangle for i in insts if i.triangle is not None), None)
    return SampleResult(triangle=tri, space=tracker.snapshot(), instances=instances)


# ---------------------------------------------------------------------------
# 3-pass EA/VA


class EA3Instance:
    __slots__ = (
        "edge1",
        "edge2",
        "_res1_count",
        "deg",
        "nbr1",
        "nbr2",
        "alive",
        "u",
        "v",
        "w",
        "deg_w",
        "seen_uw",
        "seen_vw",
        "first_pass1_edge",
    )

    def __init__(self):
        self.edge1: Optional[Edge] = None
        self.edge2: Optional[Edge] = None
        self._res1_count = 0
        self.deg: dict[int, int] = {}
        self.nbr1 = SingleSlot()
        self.nbr2 = SingleSlot()
        self.alive = True
        self.u = self.v = self.w = None
        self.deg_w = 0
        self.seen_uw = False
        self.seen_vw = False
        self.first_pass1_edge: Optional[Edge] = None

    # Pass 1: two independent uniform edges (with replacement)
    def pass1_feed(self, e: Edge, rng) -> None:
        self._res1_count += 1
        c = self._res1_count
        if c == 1:
            self.edge1 = e
            self.edge2 = e
        else:
            if rng.random() * c < 1.0:
                self.edge1 = e
            if rng.random() * c < 1.0:
                self.edge2 = e

    def pass1_end(self) -> None:
        self.first_pass1_edge = self.edge1
        if self.edge1 is None:
            self.alive = False
            return
        for x in (*self.edge1, *self.edge2):
            self.deg[x] = 0

    # Pass 2: degrees of the four endpoints; uniform neighbor of each
    # endpoint of the first edge
    def pass2_feed(self, e: Edge, rng) -> None:
        if not self.alive:
            return
        a, b = e
        if a in self.deg:
            self.deg[a] += 1
        if b in self.deg:
            self.deg[b] += 1
        u1, u2 = self.edge1
        if a == u1:
            self.nbr1.offer(b, rng)
        elif b == u1:
            self.nbr1.offer(a, rng)
        if a == u2:
            self.nbr2.offer(b, rng)
        elif b == u2:
            self.nbr2.offer(a, rng)

    def process(self, m: int, rng) -> None:
        """Relabel the first edge so u precedes v under (degree, id), then
        choose the candidate third vertex w and the acceptance coin."""
        if not self.alive:
            return
        a, b = self.edge1
        if (self.deg[a], a) <= (self.deg[b], b):
            u, v = a, b
            nbr_u = self.nbr1
        else:
            u, v = b, a
            nbr_u = self.nbr2
        self.u, self.v = u, v
        two_m = 2 * m
        if self.deg[u] * self.deg[u] <= two_m:
            self.w = nbr_u.item
            if self.w is None or not bernoulli(self.deg[u] / math.sqrt(two_m), rng):
                self.alive = False
        else:
            x, y = self.edge2
            self.w = x if rng.random() < 0.5 else y
            if self.deg[self.w] * self.deg[self.w] <= two_m:
                self.alive = False
            elif not bernoulli(math.sqrt(two_m) / self.deg[self.w], rng):
                self.alive = False
        if self.alive and (self.w == u or self.w == v):
            # degenerate candidate; cannot form a triangle with {u, v}
            self.alive = False
        if self.alive:
            self.deg_w = 0
            self.seen_uw = False
            self.seen_vw = False

    # Pass 3: confirm the two missing edges and count deg(w) for the order check
    def pass3_feed(self, e: Edge) -> None:
        if not self.alive:
            return
        a, b = e
        if a == self.w or b == self.w:
            self.deg_w += 1
        if e == canonical_edge(self.u, self.w):
            self.seen_uw = True
        if e == canonical_edge(self.v, self.w):
            self.seen_vw = True

    def finish(self) -> Optional[Triangle]:
        if not self.alive or not (self.seen_uw and self.seen_vw):
            return None
        u, v, w = self.u, self.v, self.w
        ku = (self.deg[u], u)
        kv = (self.deg[v], v)
        kw = (self.deg_w, w)
        if not (ku < kv < kw):
            return None
        return tuple(sorted((u, v, w)))  # type: ignore[return-value]


def ea3_instance(pass1, pass2, pass3, m: int, rng) -> Optional[Triangle]:
    """Run a single 3-pass instance over three cursors of the same stream."""
    inst = EA3Instance()
    for it in pass1:
        if it[0] == "E":
            inst.pass1_feed(canonical_edge(it[1], it[2]), rng)
    inst.pass1_end()
    for it in pass2:
        if it[0] == "E":
            inst.pass2_feed(canonical_edge(it[1], it[2]), rng)
    inst.process(m, rng)
    for it in pass3:
        if it[0] == "E":
            inst.pass3_feed(canonical_edge(it[1], it[2]))
    return inst.finish()


def ea3_run(factory: StreamFactory, instances: int, rng) -> SampleResult:
    """t interleaved instances sharing three passes; first success wins."""
    if instances < 1:
        raise ValueError(f"need at least one instance, got {instances}")
    _require_ea(factory)
    m = sum(1 for it in factory.stream.items if it[0] == "E")
    insts = [EA3Instance() for _ in range(instances)]
    for it in factory.cursor():
        if it[0] == "E":
            e = canonical_edge(it[1], it[2])
            for inst in insts:
                inst.pass1_feed(e, rng)
    for inst in insts:
        inst.pass1_end()
    for it in factory.cursor():
        if it[0] == "E":
            e = canonical_edge(it[1], it[2])
            for inst in insts:
                inst.pass2_feed(e, rng)
    for inst in insts:
        inst.process(m, rng)
    alive = [inst for inst in insts if inst.alive]
    for it in factory.cursor():
        if it[0] == "E":
            e = canonical_edge(it[1], it[2])
            for inst in alive:
                inst.pass3_feed(e)
    tracker = SpaceTracker()
    # per instance: 2 edges, 4 degree counters, 2 neighbor slots, 1 candidate
    tracker.observe(edges=2 * instances, counters=7 * instances)
    tri = None
    for inst in insts:
        out = inst.finish()
        if out is not None:
            tri = out
            break
    return SampleResult(triangle=tri, space=tracker.snapshot(), instances=instances)


# ---------------------------------------------------------------------------
# Instance-count sizing


def ea1_space_bound(m: int, T: int) -> float:
    return min(m, m * m / max(T, 1))


def ea3_space_bound(m: int, T: int) -> float:
    return m ** 1.5 / max(T, 1)


def instance_count(bound: float, n: int, c: float = 4.0) -> int:
    return max(1, math.ceil(c * bound * math.log(max(n, 3))))
