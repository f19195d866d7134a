"""Execution results and space accounting shared by all algorithms."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .graphs import Triangle


class SpaceTracker:
    """Counts simultaneously stored items (edges, triangles, counters) and
    remembers the peak. Algorithms call observe() at the points where their
    stored state can be largest (arrivals / block boundaries)."""

    def __init__(self):
        self.peak_items = 0
        self.peak_per_kind: dict[str, int] = {}

    def observe(self, **kinds: int) -> None:
        total = sum(kinds.values())
        if total > self.peak_items:
            self.peak_items = total
        for k, v in kinds.items():
            if v > self.peak_per_kind.get(k, 0):
                self.peak_per_kind[k] = v

    def snapshot(self) -> "SpaceStats":
        return SpaceStats(peak_items=self.peak_items, per_kind=dict(self.peak_per_kind))


@dataclass(frozen=True)
class SpaceStats:
    peak_items: int
    per_kind: dict


@dataclass(frozen=True)
class SampleResult:
    """Outcome of one algorithm execution: a triangle or a failure, plus the
    space used and how many parallel instances the run employed."""

    triangle: Optional[Triangle]
    space: SpaceStats
    instances: int = 1
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.triangle is not None
