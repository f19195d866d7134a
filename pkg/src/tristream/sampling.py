"""Reservoir-sampling primitives shared by every algorithm.

RNG contract: counter-based Philox generators derived from a master seed via
SeedSequence spawning, so each trial owns an independent substream and no
global state is touched.
"""
from __future__ import annotations

from typing import Any, Optional

import numpy as np

WITH_REPLACEMENT = "with_replacement"
WITHOUT_REPLACEMENT = "without_replacement"
KEEP_ALL = "keep_all"

_MODES = (WITH_REPLACEMENT, WITHOUT_REPLACEMENT, KEEP_ALL)


def make_rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def trial_rngs(master_seed, n: int) -> list[np.random.Generator]:
    """n independent substreams derived from the master seed."""
    children = np.random.SeedSequence(master_seed).spawn(n)
    return [np.random.Generator(np.random.Philox(c)) for c in children]


def bernoulli(p: float, rng) -> bool:
    """True with probability p, after clamping p into [0, 1]."""
    if p <= 0.0:
        return False
    if p >= 1.0:
        return True
    return rng.random() < p


class Reservoir:
    """k-slot reservoir over a stream of offers.

    with_replacement: k independent single-slot reservoirs, each uniform over
    all offers seen at every prefix.
    without_replacement: slots hold a uniform k-subset of the offers.
    keep_all: retains every offer in arrival order (test/oracle mode).

    offer() returns the slot indices that took the item, so callers keeping
    per-slot side state know exactly which slots were reset.
    """

    def __init__(self, capacity: int, mode: str = WITH_REPLACEMENT):
        if mode not in _MODES:
            raise ValueError(f"unknown reservoir mode {mode!r}")
        if mode != KEEP_ALL and capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self.mode = mode
        self.slots: list[Any] = []
        self.offers_seen = 0

    def offer(self, item, rng) -> list[int]:
        self.offers_seen += 1
        c = self.offers_seen
        if self.mode == KEEP_ALL:
            self.slots.append(item)
            return [len(self.slots) - 1]
        if self.mode == WITH_REPLACEMENT:
            if c == 1:
                self.slots = [item] * self.capacity
                return list(range(self.capacity))
            taken = [i for i in range(self.capacity) if rng.random() * c < 1.0]
            for i in taken:
                self.slots[i] = item
            return taken
        # without replacement
        if len(self.slots) < self.capacity:
            self.slots.append(item)
            return [len(self.slots) - 1]
        if rng.random() * c < self.capacity:
            i = int(rng.integers(self.capacity))
            self.slots[i] = item
            return [i]
        return []


class SingleSlot:
    """One-slot uniform reservoir; convenience wrapper used for the
    per-record triangle samplers."""

    __slots__ = ("item", "count")

    def __init__(self):
        self.item = None
        self.count = 0

    def offer(self, item, rng) -> bool:
        self.count += 1
        if self.count == 1 or rng.random() * self.count < 1.0:
            self.item = item
            return True
        return False


class WeightedReservoir:
    """Single-slot weighted reservoir: after offers of weights w_1..w_n, the
    slot holds item i with probability w_i / sum(w)."""

    __slots__ = ("item", "weight", "total_weight")

    def __init__(self):
        self.item = None
        self.weight = 0.0
        self.total_weight = 0.0

    def offer(self, item, weight: float, rng) -> bool:
        if weight <= 0:
            raise ValueError(f"weight must be positive, got {weight}")
        self.total_weight += weight
        if self.total_weight == weight or rng.random() * self.total_weight < weight:
            self.item = item
            self.weight = weight
            return True
        return False
