"""Trial runner, empirical-distribution statistics, concentration-bound
helpers, the sampling-to-counting estimator, and space-budget checks."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Collection, Mapping, Optional

import numpy as np

from . import adjacency_list as al
from . import edge_arrival as ea
from .graphs import Graph, Triangle, enumerate_triangles
from .results import SampleResult
from .sampling import make_rng
from .streams import AL, EA, VA, Stream, StreamFactory, make_al_stream, make_ea_stream, make_va_stream


class EvalError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Distances and concentration bounds


def l1_to_uniform(counts: Mapping[Triangle, int], support: Collection[Triangle]) -> float:
    """l1 distance between the empirical distribution and uniform over the
    full support (zero-count triangles included)."""
    total = sum(counts.values())
    if total == 0:
        raise EvalError("cannot compute a distance from zero successes")
    if len(support) < 1:
        raise EvalError("empty support")
    stray = set(counts) - set(support)
    if stray:
        raise EvalError(f"counted triangles outside the support: {sorted(stray)[:3]}")
    u = 1.0 / len(support)
    return sum(abs(counts.get(t, 0) / total - u) for t in support)


def l1_between(counts_a: Mapping, counts_b: Mapping) -> float:
    """l1 distance between two empirical distributions."""
    na, nb = sum(counts_a.values()), sum(counts_b.values())
    if na == 0 or nb == 0:
        raise EvalError("cannot compare empty distributions")
    keys = set(counts_a) | set(counts_b)
    return sum(abs(counts_a.get(k, 0) / na - counts_b.get(k, 0) / nb) for k in keys)


CHERNOFF_RELATIVE = "chernoff_relative"
CHERNOFF_ADDITIVE = "chernoff_additive"
HOEFFDING = "hoeffding"


@dataclass(frozen=True)
class ToleranceSpec:
    kind: str
    delta: float
    mu: Optional[float] = None  # expectation, for the relative bound
    n: Optional[float] = None  # number of [0,1] terms, for the additive forms


def chernoff_tolerance(spec: ToleranceSpec) -> float:
    """Failure-probability bound for the given deviation."""
    if spec.kind == CHERNOFF_RELATIVE:
        if spec.mu is None:
            raise EvalError("relative bound needs mu")
        if not (0.0 <= spec.delta <= 1.0):
            raise EvalError(f"relative bound needs 0 <= delta <= 1, got {spec.delta}")
        return 2.0 * math.exp(-spec.mu * spec.delta ** 2 / 3.0)
    if spec.kind == CHERNOFF_ADDITIVE:
        if spec.n is None:
            raise EvalError("additive bound needs n")
        return math.exp(-2.0 * spec.delta ** 2 / spec.n)
    if spec.kind == HOEFFDING:
        if spec.n is None:
            raise EvalError("Hoeffding bound needs n")
        return 2.0 * math.exp(-2.0 * spec.delta ** 2 / spec.n)
    raise EvalError(f"unknown tolerance kind {spec.kind!r}")


def relative_delta(mu: float, fail_prob: float) -> float:
    """delta such that the relative Chernoff bound equals fail_prob."""
    return min(1.0, math.sqrt(3.0 * math.log(2.0 / fail_prob) / mu))


def hoeffding_delta(n: float, fail_prob: float) -> float:
    """delta such that the two-sided Hoeffding bound equals fail_prob."""
    return math.sqrt(n * math.log(2.0 / fail_prob) / 2.0)


# ---------------------------------------------------------------------------
# Algorithm specs


@dataclass(frozen=True)
class AlgoSpec:
    name: str
    model: str  # stream model the algorithm consumes
    run: Callable[[StreamFactory, np.random.Generator], SampleResult]
    params_echo: str = ""
    expected_passes: int = 1


ALGO_NAMES = ("ea1", "ea3", "al1", "al1-wrs", "al3")


def build_algo_spec(
    name: str,
    g: Graph,
    epsilon: float = 0.5,
    T: Optional[int] = None,
    model: Optional[str] = None,
    instances: Optional[int] = None,
    c_inst: float = 4.0,
    al_params: Optional[al.AlgoParams] = None,
    **param_overrides,
) -> AlgoSpec:
    """Wire an algorithm name to a runnable spec for the given graph.

    T defaults to the exact oracle count; pass a promised lower bound to run
    in promise mode.
    """
    if name not in ALGO_NAMES:
        raise EvalError(f"unknown algorithm {name!r}")
    if T is None:
        T = max(1, len(enumerate_triangles(g)))
    m, n = g.m, g.n
    if name in ("ea1", "ea3"):
        if model is None:
            model = EA
        if model not in (EA, VA):
            raise EvalError(f"{name} requires an EA or VA stream, got {model}")
        if name == "ea1":
            t = instances or ea.instance_count(ea.ea1_space_bound(m, T), n, c_inst)
            run = lambda f, rng: ea.ea1_run(f, t, rng)
            passes = 1
        else:
            t = instances or ea.instance_count(ea.ea3_space_bound(m, T), n, c_inst)
            run = lambda f, rng: ea.ea3_run(f, t, rng)
            passes = 3
        return AlgoSpec(
            name=name,
            model=model,
            run=run,
            params_echo=f"T={T} instances={t}",
            expected_passes=passes,
        )
    if model is None:
        model = AL
    if model != AL:
        raise EvalError(f"{name} requires an AL stream, got {model}")
    params = al_params or al.AlgoParams(epsilon=epsilon, T=T, n=n, **param_overrides)
    if name == "al3":
        run = lambda f, rng: al.al3_run(f, params, rng)
        passes = 3
    else:
        variant = "wrs" if name == "al1-wrs" else "explicit"
        run = lambda f, rng: al.al1_run(f, params, rng, variant=variant)
        passes = 1
    echo = (
        f"eps={params.epsilon} T={params.T} tau3={params.tau3:.6g} "
        f"tau1={params.tau1:.6g} kappa={params.kappa:.6g} p={params.p:.6g}"
    )
    return AlgoSpec(name=name, model=model, run=run, params_echo=echo, expected_passes=passes)


def make_stream(g: Graph, model: str, rng) -> Stream:
    if model == EA:
        return make_ea_stream(g, rng)
    if model == VA:
        return make_va_stream(g, rng)
    if model == AL:
        return make_al_stream(g, rng)
    raise EvalError(f"unknown stream model {model!r}")


# ---------------------------------------------------------------------------
# Trial runner


@dataclass(frozen=True)
class TrialReport:
    algo: str
    params_echo: str
    trials: int
    successes: int
    counts: dict
    success_rate: float
    empirical_l1: Optional[float]
    space_min: int
    space_mean: float
    space_max: int
    passes: int
    seed: int
    branch_counts: dict = field(default_factory=dict)

    def serialize(self) -> str:
        lines = [
            f"algo={self.algo}",
            f"params={self.params_echo}",
            f"trials={self.trials}",
            f"successes={self.successes}",
            f"success_rate={self.success_rate!r}",
            f"empirical_l1={'NA' if self.empirical_l1 is None else repr(self.empirical_l1)}",
            f"space_min={self.space_min}",
            f"space_mean={self.space_mean!r}",
            f"space_max={self.space_max}",
            f"passes={self.passes}",
            f"seed={self.seed}",
        ]
        for b in sorted(self.branch_counts):
            lines.append(f"branch {b} {self.branch_counts[b]}")
        for tri in sorted(self.counts):
            a, b, c = tri
            lines.append(f"count {a} {b} {c} {self.counts[tri]}")
        return "\n".join(lines) + "\n"


FRESH = "fresh"
FROZEN = "frozen"


def run_trials(
    spec: AlgoSpec,
    g: Graph,
    N: int,
    master_seed: int,
    stream_policy: str = FRESH,
    frozen_stream: Optional[Stream] = None,
) -> TrialReport:
    """N independent executions; every reported triangle is checked against
    the oracle; deterministic given the master seed."""
    if N < 1:
        raise EvalError(f"need N >= 1, got {N}")
    if stream_policy not in (FRESH, FROZEN):
        raise EvalError(f"unknown stream policy {stream_policy!r}")
    oracle = enumerate_triangles(g)
    children = np.random.SeedSequence(master_seed).spawn(N)
    if stream_policy == FROZEN and frozen_stream is None:
        frozen_stream = make_stream(g, spec.model, make_rng(master_seed))
    counts: dict[Triangle, int] = {}
    branch_counts: dict[str, int] = {}
    successes = 0
    peaks: list[int] = []
    passes_seen: set[int] = set()
    for child in children:
        rng = np.random.Generator(np.random.Philox(child))
        stream = frozen_stream if stream_policy == FROZEN else make_stream(g, spec.model, rng)
        factory = StreamFactory(stream)
        result = spec.run(factory, rng)
        passes_seen.add(factory.passes)
        peaks.append(result.space.peak_items)
        branch = result.notes.get("branch")
        if branch is not None:
            branch_counts[branch] = branch_counts.get(branch, 0) + 1
        if result.triangle is not None:
            if result.triangle not in oracle:
                raise AssertionError(
                    f"{spec.name} reported {result.triangle}, which is not a triangle of the graph"
                )
            counts[result.triangle] = counts.get(result.triangle, 0) + 1
            successes += 1
    if len(passes_seen) != 1 or passes_seen != {spec.expected_passes}:
        raise AssertionError(
            f"{spec.name} consumed {sorted(passes_seen)} passes, expected {spec.expected_passes}"
        )
    l1 = l1_to_uniform(counts, oracle) if successes and oracle else None
    return TrialReport(
        algo=spec.name,
        params_echo=spec.params_echo,
        trials=N,
        successes=successes,
        counts=counts,
        success_rate=successes / N,
        empirical_l1=l1,
        space_min=min(peaks),
        space_mean=sum(peaks) / len(peaks),
        space_max=max(peaks),
        passes=spec.expected_passes,
        seed=master_seed,
        branch_counts=branch_counts,
    )


def collect_successes(
    run_one: Callable[[np.random.Generator], Optional[Triangle]],
    rng,
    target_successes: int,
    max_runs: int,
    oracle: Collection[Triangle],
) -> tuple[dict, int]:
    """Fast loop for Monte Carlo distribution checks: repeat run_one until the
    success target (or the run cap) is reached. Returns (counts, runs)."""
    counts: dict[Triangle, int] = {}
    got = 0
    runs = 0
    while got < target_successes and runs < max_runs:
        runs += 1
        tri = run_one(rng)
        if tri is not None:
            if tri not in oracle:
                raise AssertionError(f"sampled {tri}, not a triangle of the graph")
            counts[tri] = counts.get(tri, 0) + 1
            got += 1
    return counts, runs


# ---------------------------------------------------------------------------
# Sampling-to-counting


@dataclass(frozen=True)
class TriangleEstimate:
    t_hat: float
    successes: int
    trials: int
    q: float
    interval: tuple[float, float]
    widened: bool


def estimate_T_by_sampling(
    spec: AlgoSpec,
    g: Graph,
    q: float,
    N: int,
    master_seed: int,
    fail_prob: float = 1e-6,
) -> TriangleEstimate:
    """Estimate the triangle count from the success rate of a single-instance
    sampler whose per-triangle output probability q is known analytically."""
    if q <= 0:
        raise EvalError(f"need q > 0, got {q}")
    rng = make_rng(master_seed)
    successes = 0
    for _ in range(N):
        stream = make_stream(g, spec.model, rng)
        result = spec.run(StreamFactory(stream), rng)
        if result.triangle is not None:
            successes += 1
    t_hat = (successes / N) / q
    if successes == 0:
        return TriangleEstimate(
            t_hat=0.0, successes=0, trials=N, q=q, interval=(0.0, math.inf), widened=True
        )
    delta = relative_delta(successes, fail_prob)
    return TriangleEstimate(
        t_hat=t_hat,
        successes=successes,
        trials=N,
        q=q,
        interval=(t_hat * (1 - delta), t_hat * (1 + delta)),
        widened=False,
    )


# ---------------------------------------------------------------------------
# Space budgets


@dataclass(frozen=True)
class BudgetCheck:
    ok: bool
    peak: int
    limit: float
    margin: float  # limit / peak


def space_budget_check(report: TrialReport, budget: float, n: int, c: float = 8.0) -> BudgetCheck:
    """Compare the worst observed peak against c * budget * ln n."""
    limit = c * budget * math.log(max(n, 3))
    peak = report.space_max
    return BudgetCheck(ok=peak <= limit, peak=peak, limit=limit, margin=limit / max(peak, 1))
