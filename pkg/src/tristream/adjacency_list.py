"""Adjacency-list triangle samplers.

Three-pass: reservoir a multiset of candidate edges, count the triangles
incident on each, reservoir-sample one incident triangle per candidate, then
accept light candidates with probability lambda_e / (i * tau) where i is the
number of light edges of the sampled triangle. Heavy candidates are ignored;
conditioned on success the output is uniform over the light triangles.

One-pass: two helpers share the single pass. The light helper reservoirs
edge slots and, for each slot whose edge was caught at its first arrival,
counts and uniformly samples the triangles charged to it (charged = the
(earliest, latest)-exposed edge of the triangle). The heavy helper keeps each
edge independently with probability p and uses those edges to detect, for
every edge finishing its second arrival, the charged triangles whose
earliest-to-middle edge was kept; counters reaching kappa promote the edge to
the heavy set (or feed a single-slot weighted reservoir in the low-space
variant). A combiner picks the light or heavy sample from the estimated
heavy mass.

Within a block we buffer the exposed vertex's neighbor set and evaluate
detections at the block boundary: a tracked edge {v,w} fires in block u
exactly when both v and w are neighbors of u, which happens once per triangle
(and, for charged-triangle counting, only in blocks strictly between the
edge's two arrivals).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .graphs import Edge, Triangle, canonical_edge
from .results import SampleResult, SpaceTracker
from .sampling import SingleSlot, WeightedReservoir, bernoulli
from .streams import AL, StreamFactory


class ModelError(ValueError):
    """Algorithm fed a stream from an incompatible model."""


def _require_al(factory: StreamFactory) -> None:
    if factory.model != AL:
        raise ModelError("adjacency-list algorithms require an AL stream")


@dataclass
class AlgoParams:
    """Thresholds and constants for the AL samplers.

    Defaults follow the analysis; every constant is a field so tests can
    force the all-light / all-heavy regimes at desk scale.
    """

    epsilon: float
    T: int
    n: int
    tau3: Optional[float] = None
    tau1: Optional[float] = None
    kappa: Optional[float] = None
    p: Optional[float] = None
    c_F: float = 4.0
    c_inst: float = 4.0
    light_slots: Optional[int] = None  # override for the reservoir size
    sampler_mode: str = "reservoir"  # or "keep_all" (oracle/test mode)
    strict_abort: bool = False  # literal combiner semantics: any helper failure aborts

    def __post_init__(self):
        if not (0.0 < self.epsilon < 2.0):
            raise ValueError(f"epsilon must be in (0, 2), got {self.epsilon}")
        if self.T < 1:
            raise ValueError(f"T must be >= 1, got {self.T}")
        logn = math.log(max(self.n, 3))
        if self.tau3 is None:
            self.tau3 = 12.0 * (self.T / self.epsilon ** 2) ** (1.0 / 3.0)
        if self.tau1 is None:
            self.tau1 = 900.0 * math.sqrt(self.T)
        if self.kappa is None:
            self.kappa = 10.0 * logn
        if self.p is None:
            self.p = min(1.0, 100.0 * logn / (self.epsilon ** 2 * math.sqrt(self.T)))
        if self.tau3 <= 0 or self.tau1 <= 0 or self.kappa <= 0:
            raise ValueError("thresholds must be positive")
        if not (0.0 < self.p <= 1.0):
            raise ValueError(f"p must be in (0, 1], got {self.p}")

    def al3_slots(self, m: int) -> int:
        if self.light_slots is not None:
            return self.light_slots
        bound = m / max(self.T, 1) ** (2.0 / 3.0)
        return max(1, math.ceil(self.c_F * bound * math.log(max(self.n, 3))))

    def al1_slots(self, m: int) -> int:
        if self.light_slots is not None:
            return self.light_slots
        bound = m / math.sqrt(max(self.T, 1))
        return max(1, math.ceil(self.c_F * bound * math.log(max(self.n, 3))))


# ---------------------------------------------------------------------------
# Light helper (1-pass)


@dataclass
class LightRecord:
    """One reservoir slot: an oriented edge (exposing endpoint first, as of
    the arrival that created the record), the second-arrival flag, the
    charged-triangle counter and its single-slot triangle reservoir."""

    edge: tuple[int, int]  # (exposer at creation, other endpoint)
    flag: bool = False
    t_prime: int = 0
    tri: SingleSlot = field(default_factory=SingleSlot)

    @property
    def canonical(self) -> Edge:
        return canonical_edge(*self.edge)

    @property
    def delta(self) -> Optional[Triangle]:
        return self.tri.item


class SampLightHelper:
    """Streaming side of the light sampler. Feed AL items in order, then
    call finish() to obtain the slot records."""

    def __init__(self, slot_count: int, rng, mode: str = "reservoir"):
        if mode not in ("reservoir", "keep_all"):
            raise ValueError(f"unknown sampler mode {mode!r}")
        self.k = slot_count
        self.rng = rng
        self.mode = mode
        self.records: list[Optional[LightRecord]] = (
            [] if mode == "keep_all" else [None] * slot_count
        )
        self.offers = 0
        self.block_vertex: Optional[int] = None
        self.block_neighbors: set[int] = set()
        self.tracker = SpaceTracker()

    def _offer(self, u: int, v: int) -> None:
        self.offers += 1
        c = self.offers
        if self.mode == "keep_all":
            self.records.append(LightRecord(edge=(u, v)))
            return
        rnd = self.rng.random(self.k)
        for i in range(self.k):
            if rnd[i] * c < 1.0:
                self.records[i] = LightRecord(edge=(u, v))

    def feed(self, item) -> None:
        if item[0] == "V":
            self._end_block()
            self.block_vertex = item[1]
            self.block_neighbors = set()
            return
        u, v = item[1], item[2]
        # Step 1: flag every slot already holding this edge, then offer it
        e = canonical_edge(u, v)
        for r in self.records:
            if r is not None and not r.flag and r.canonical == e:
                r.flag = True
        self._offer(u, v)
        self.block_neighbors.add(v)

    def _end_block(self) -> None:
        u = self.block_vertex
        if u is None:
            return
        nbrs = self.block_neighbors
        for r in self.records:
            if r is None or r.flag:
                continue
            a, b = r.edge
            if a != u and b != u and a in nbrs and b in nbrs:
                # triangle {a, u, b}, charged to r's edge when r was created
                # at the edge's first arrival
                r.t_prime += 1
                tri = tuple(sorted((a, u, b)))
                r.tri.offer(tri, self.rng)
        live = sum(1 for r in self.records if r is not None)
        tris = sum(1 for r in self.records if r is not None and r.tri.item is not None)
        self.tracker.observe(edges=live, counters=live, triangles=tris)

    def clear_flag(self, edge: Edge) -> None:
        """Demote an edge found to be heavy (low-space variant coupling)."""
        for r in self.records:
            if r is not None and r.flag and r.canonical == edge:
                r.flag = False

    def finish(self) -> list[LightRecord]:
        self._end_block()
        self.block_vertex = None
        return [r for r in self.records if r is not None]


def samplight_helper(
    cursor, slot_count: int, rng, mode: str = "reservoir"
) -> list[LightRecord]:
    helper = SampLightHelper(slot_count, rng, mode=mode)
    for item in cursor:
        helper.feed(item)
    return helper.finish()


# ---------------------------------------------------------------------------
# Heavy helper (1-pass)


@dataclass
class HeavyRecord:
    edge: tuple[int, int]  # oriented (earlier, later) under the exposure order
    x: int
    delta: Triangle


@dataclass
class HeavySummary:
    """Either the explicit heavy-edge set or the weighted-reservoir slot,
    plus the rescaled heavy-mass estimate."""

    p: float
    records: list[HeavyRecord] = field(default_factory=list)
    wrs: Optional[WeightedReservoir] = None
    total_x: int = 0

    @property
    def t_hat_h(self) -> float:
        return self.total_x / self.p

    def heavy_edge_set(self) -> set[Edge]:
        return {canonical_edge(*r.edge) for r in self.records}


class SampHeavyHelper:
    """Streaming side of the heavy sampler.

    F2 membership is decided at each edge's first arrival. During a block,
    detections are keyed by the charged edge (earliest endpoint, block
    vertex); at the block boundary, counters that reached kappa promote
    their edge.
    """

    def __init__(
        self,
        params: AlgoParams,
        rng,
        variant: str = "explicit",
        on_promote: Optional[Callable[[Edge], None]] = None,
    ):
        if variant not in ("explicit", "wrs"):
            raise ValueError(f"unknown heavy variant {variant!r}")
        self.params = params
        self.rng = rng
        self.variant = variant
        self.on_promote = on_promote
        self.f2: dict[Edge, tuple[int, int]] = {}  # canonical -> (earlier, later)
        self.by_endpoint: dict[int, list[Edge]] = {}
        self.exposed: dict[int, int] = {}
        self.block_vertex: Optional[int] = None
        self.block_neighbors: list[int] = []
        self.counters: dict[tuple[int, int], int] = {}
        self.tris: dict[tuple[int, int], SingleSlot] = {}
        self.summary = HeavySummary(
            p=params.p, wrs=WeightedReservoir() if variant == "wrs" else None
        )
        self.tracker = SpaceTracker()

    def feed(self, item) -> None:
        if item[0] == "V":
            self._end_block()
            self.block_vertex = item[1]
            self.block_neighbors = []
            self.exposed[item[1]] = len(self.exposed)
            return
        u, v = item[1], item[2]
        if v not in self.exposed:
            # first arrival: coin flip for membership in F2
            if bernoulli(self.params.p, self.rng):
                e = canonical_edge(u, v)
                self.f2[e] = (u, v)
                self.by_endpoint.setdefault(u, []).append(e)
                self.by_endpoint.setdefault(v, []).append(e)
        self.block_neighbors.append(v)

    def _end_block(self) -> None:
        u = self.block_vertex
        if u is None:
            return
        pos_u = self.exposed[u]
        nbrs = set(self.block_neighbors)
        # detect charged triangles via fully-arrived F2 edges inside the block
        for a in self.block_neighbors:
            for e in self.by_endpoint.get(a, ()):
                first, second = self.f2[e]
                if a != second:
                    continue  # count each F2 edge once, from its later endpoint
                if self.exposed.get(second, pos_u) >= pos_u:
                    continue  # not fully arrived before this block
                if first in nbrs:
                    key = (first, u)
                    self.counters[key] = self.counters.get(key, 0) + 1
                    slot = self.tris.get(key)
                    if slot is None:
                        slot = self.tris[key] = SingleSlot()
                    tri = tuple(sorted((first, second, u)))
                    slot.offer(tri, self.rng)
        self.tracker.observe(
            edges=len(self.f2),
            counters=len(self.counters),
            triangles=len(self.tris),
            heavy=(
                3 * len(self.summary.records)
                if self.variant == "explicit"
                else (1 if self.summary.wrs.item is not None else 0)
            ),
        )
        for key, x in self.counters.items():
            if x >= self.params.kappa:
                delta = self.tris[key].item
                self.summary.total_x += x
                if self.variant == "explicit":
                    self.summary.records.append(HeavyRecord(edge=key, x=x, delta=delta))
                else:
                    self.summary.wrs.offer(delta, x / self.params.p, self.rng)
                if self.on_promote is not None:
                    self.on_promote(canonical_edge(*key))
        self.counters = {}
        self.tris = {}

    def finish(self) -> HeavySummary:
        self._end_block()
        self.block_vertex = None
        return self.summary


def sampheavy_helper(
    cursor, params: AlgoParams, rng, variant: str = "explicit"
) -> HeavySummary:
    helper = SampHeavyHelper(params, rng, variant=variant)
    for item in cursor:
        helper.feed(item)
    return helper.finish()


# ---------------------------------------------------------------------------
# Post-processing samplers


def sample_light_triangle(
    records: Iterable[LightRecord],
    heavy_filter: Callable[[Edge], bool],
    tau1: float,
    rng,
) -> Optional[Triangle]:
    """Keep each flagged, non-heavy slot's triangle with probability
    min(t'/tau, 1); return the kept triangle of the lowest-index slot."""
    for r in records:
        if not r.flag or heavy_filter(r.canonical):
            continue
        if r.delta is None:
            continue
        if bernoulli(r.t_prime / tau1, rng):
            return r.delta
    return None


def sample_heavy_triangle(summary: HeavySummary, rng) -> Optional[Triangle]:
    """Explicit variant: pick a heavy record with probability proportional to
    its counter and return its triangle. WRS variant: the reservoir slot."""
    if summary.wrs is not None:
        return summary.wrs.item
    if not summary.records:
        return None
    total = sum(r.x for r in summary.records)
    target = rng.random() * total
    acc = 0.0
    for r in summary.records:
        acc += r.x
        if target < acc:
            return r.delta
    return summary.records[-1].delta


# ---------------------------------------------------------------------------
# 1-pass combiner


def al1_run(
    factory: StreamFactory,
    params: AlgoParams,
    rng,
    variant: str = "explicit",
) -> SampleResult:
    """One shared AL pass feeding both helpers, then the branch on the
    estimated heavy mass.

    A branch fails only when the sampler it actually consults returned
    nothing (in the mixed branch the coin is flipped first); set
    params.strict_abort for the literal any-failure-aborts semantics.
    """
    _require_al(factory)
    m = sum(1 for it in factory.stream.items if it[0] == "E") // 2
    k1 = params.al1_slots(m)
    light = SampLightHelper(k1, rng, mode=params.sampler_mode)
    on_promote = light.clear_flag if variant == "wrs" else None
    heavy = SampHeavyHelper(params, rng, variant=variant, on_promote=on_promote)
    for item in factory.cursor():
        light.feed(item)
        heavy.feed(item)
    records = light.finish()
    summary = heavy.finish()

    if variant == "explicit":
        heavy_set = summary.heavy_edge_set()
        heavy_filter = heavy_set.__contains__
    else:
        # flags were cleared on promotion during the pass
        heavy_filter = lambda e: False

    t_hat_h = summary.t_hat_h
    delta_l = sample_light_triangle(records, heavy_filter, params.tau1, rng)
    delta_h = sample_heavy_triangle(summary, rng)

    eps, T = params.epsilon, params.T
    if t_hat_h <= eps * T / 10.0:
        branch = "light"
        chosen = delta_l
    elif t_hat_h >= (1.0 - eps / 10.0) * T:
        branch = "heavy"
        chosen = delta_h
    else:
        branch = "mixed"
        chosen = delta_h if bernoulli(t_hat_h / T, rng) else delta_l
    if params.strict_abort and (delta_l is None or delta_h is None):
        chosen = None

    tracker = SpaceTracker()
    tracker.observe(
        light=light.tracker.peak_items, heavy=heavy.tracker.peak_items
    )
    return SampleResult(
        triangle=chosen,
        space=tracker.snapshot(),
        instances=1,
        notes={
            "branch": branch,
            "t_hat_h": t_hat_h,
            "slots": k1,
            "heavy_summary_peak": heavy.tracker.peak_per_kind.get("heavy", 0),
        },
    )


# ---------------------------------------------------------------------------
# 3-pass sampler


class _Al3Slot:
    __slots__ = ("edge", "lam", "tri", "lam_other")

    def __init__(self, edge: Edge):
        self.edge = edge
        self.lam = 0
        self.tri = SingleSlot()
        self.lam_other: dict[Edge, int] = {}


def al3_run(factory: StreamFactory, params: AlgoParams, rng) -> SampleResult:
    """Three passes: reservoir candidate edges; count incident triangles and
    sample one per candidate; count the sampled triangles' other edges; then
    accept light candidates with probability lambda_e / (i * tau)."""
    _require_al(factory)
    m = sum(1 for it in factory.stream.items if it[0] == "E") // 2
    k = params.al3_slots(m)
    tau = params.tau3

    # Pass 1: k with-replacement slots, uniform over edges (each edge is
    # offered at both of its arrivals)
    slots: list[Optional[Edge]] = [None] * k
    offers = 0
    for item in factory.cursor():
        if item[0] != "E":
            continue
        offers += 1
        e = canonical_edge(item[1], item[2])
        rnd = rng.random(k)
        for i in range(k):
            if rnd[i] * offers < 1.0:
                slots[i] = e
    records = [_Al3Slot(e) for e in slots if e is not None]

    # Pass 2: per candidate, lambda_e and a uniform incident triangle
    def scan_blocks(cursor):
        block_u: Optional[int] = None
        nbrs: set[int] = set()
        for item in cursor:
            if item[0] == "V":
                if block_u is not None:
                    yield block_u, nbrs
                block_u = item[1]
                nbrs = set()
            else:
                nbrs.add(item[2])
        if block_u is not None:
            yield block_u, nbrs

    for u, nbrs in scan_blocks(factory.cursor()):
        for r in records:
            a, b = r.edge
            if a != u and b != u and a in nbrs and b in nbrs:
                r.lam += 1
                r.tri.offer(tuple(sorted((a, u, b))), rng)

    # Pass 3: lambda of the two other edges of each sampled triangle
    watch: dict[Edge, int] = {}
    for r in records:
        tri = r.tri.item
        if tri is None:
            continue
        a, b, c = tri
        for e in ((a, b), (a, c), (b, c)):
            if e != r.edge:
                r.lam_other[e] = 0
                watch[e] = 0
    for u, nbrs in scan_blocks(factory.cursor()):
        for e in watch:
            a, b = e
            if a != u and b != u and a in nbrs and b in nbrs:
                watch[e] += 1
    for r in records:
        for e in r.lam_other:
            r.lam_other[e] = watch[e]

    # Process: ignore heavy candidates, mark light ones
    chosen: Optional[Triangle] = None
    for r in records:
        if r.lam >= tau:
            continue
        tri = r.tri.item
        if tri is None:
            continue
        lams = [r.lam] + list(r.lam_other.values())
        i_light = sum(1 for lam in lams if lam < tau)
        if i_light == 0:
            continue
        if bernoulli(r.lam / (i_light * tau), rng):
            chosen = tri
            break

    tracker = SpaceTracker()
    tracker.observe(
        edges=len(records) + len(watch),
        counters=len(records) + len(watch),
        triangles=sum(1 for r in records if r.tri.item is not None),
    )
    return SampleResult(
        triangle=chosen,
        space=tracker.snapshot(),
        instances=len(records),
        notes={"slots": k},
    )
