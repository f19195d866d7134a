"""Acceptance gate: twelve Monte Carlo / exactness criteria at fixed seeds.

Distribution checks use single-instance loops with one shared generator:
the conditional output distributions are per-execution properties, so the
statistics are identical to spawned substreams but far cheaper at 10^5-10^6
executions. Space and pass-discipline checks run through run_trials on the
same configurations (the report bank in conftest).
"""
import math
from collections import Counter
from fractions import Fraction

import pytest

from conftest import BANK_SEED, record_criterion
from tristream import (
    KEEP_ALL,
    WITH_REPLACEMENT,
    WITHOUT_REPLACEMENT,
    AlgoParams,
    Graph,
    Reservoir,
    SingleSlot,
    StreamFactory,
    WeightedReservoir,
    build_algo_spec,
    canonical_edge,
    charge_by_degree_order,
    charge_by_stream_order,
    complete_graph,
    ea1_instance,
    ea3_instance,
    enumerate_triangles,
    estimate_T_by_sampling,
    gnp_graph,
    l1_between,
    l1_to_uniform,
    make_al_stream,
    make_ea_stream,
    make_rng,
    run_trials,
    sampheavy_helper,
    samplight_helper,
    triangles_per_edge,
)
from tristream.adjacency_list import al1_run
from tristream.edge_arrival import ea1_space_bound, ea3_space_bound
from tristream.evaluate import collect_successes, space_budget_check


def test_criterion_01_oracle_suite():
    """200 random graphs: triangle identities hold exactly."""
    rng = make_rng(101)
    checked = 0
    for _ in range(200):
        n = int(rng.integers(3, 13))
        density = float(rng.random())
        g = gnp_graph(n, density, rng)
        T = len(enumerate_triangles(g))
        assert triangles_per_edge(g).total() == 3 * T
        order = [int(v) for v in rng.permutation(n)]
        assert sum(charge_by_stream_order(g, order).t.values()) == T
        assert sum(charge_by_degree_order(g).t.values()) == T
        assert T <= g.m ** 1.5 + 1e-9
        checked += 1
    record_criterion(1, "oracle identities on 200 random graphs", True, f"{checked} graphs")
    assert checked == 200


def test_criterion_02_reservoir_uniformity():
    """Frequency bands for every reservoir mode at failure budget 1e-6."""
    N = 100_000
    cells = 9 + 3 + 3 + 4
    # two-sided Hoeffding per cell, union bound across all 19 cells
    delta = math.sqrt(N * math.log(2 * cells / 1e-6) / 2)
    rng = make_rng(102)

    def band(counts, probs):
        return all(abs(counts.get(k, 0) - N * p) <= delta for k, p in probs.items())

    wr = Counter()
    for _ in range(N):
        r = Reservoir(2, mode=WITH_REPLACEMENT)
        for x in "abc":
            r.offer(x, rng)
        wr[tuple(r.slots)] += 1
    ok_wr = band(wr, {(x, y): 1 / 9 for x in "abc" for y in "abc"})

    wor = Counter()
    for _ in range(N):
        r = Reservoir(2, mode=WITHOUT_REPLACEMENT)
        for x in "abc":
            r.offer(x, rng)
        wor[frozenset(r.slots)] += 1
    ok_wor = band(wor, {frozenset(s): 1 / 3 for s in ("ab", "ac", "bc")})

    wt = Counter()
    for _ in range(N):
        w = WeightedReservoir()
        for x, wgt in (("a", 1.0), ("b", 2.0), ("c", 3.0)):
            w.offer(x, wgt, rng)
        wt[w.item] += 1
    ok_wt = band(wt, {"a": 1 / 6, "b": 2 / 6, "c": 3 / 6})

    ss = Counter()
    for _ in range(N):
        s = SingleSlot()
        for x in "abcd":
            s.offer(x, rng)
        ss[s.item] += 1
    ok_ss = band(ss, {x: 1 / 4 for x in "abcd"})

    ok = ok_wr and ok_wor and ok_wt and ok_ss
    record_criterion(2, "reservoir uniformity at 1e-6 budget", ok, f"band +-{delta:.0f} of 1e5")
    assert ok, (wr, wor, wt, ss)


def test_criterion_03_ea1_rate(k3):
    """1-pass EA success probability on K3 is 2/9 within relative 0.02."""
    N = 1_000_000
    rng = make_rng(103)
    succ = 0
    for _ in range(N):
        s = make_ea_stream(k3, rng)
        if ea1_instance(iter(s.items), rng) is not None:
            succ += 1
    rate, target = succ / N, Fraction(2, 9)
    ok = abs(rate - float(target)) <= 0.02 * float(target)
    record_criterion(3, "ea1 K3 rate = 2/9 +- 2%", ok, f"observed {rate:.5f}")
    assert ok, rate


def test_criterion_04_ea3_rate(k3):
    """3-pass EA success probability on K3 is 1/(3*sqrt(6)) within relative 0.02."""
    N = 1_000_000
    rng = make_rng(104)
    m = k3.m
    succ = 0
    for _ in range(N):
        s = make_ea_stream(k3, rng)
        if ea3_instance(iter(s.items), iter(s.items), iter(s.items), m, rng) is not None:
            succ += 1
    rate, target = succ / N, 1 / (3 * math.sqrt(6))
    ok = abs(rate - target) <= 0.02 * target
    record_criterion(4, "ea3 K3 rate = 1/(3*sqrt 6) +- 2%", ok, f"observed {rate:.5f}")
    assert ok, rate


def test_criterion_05_conditional_uniformity_ea(k5, planted):
    """>= 5e4 successes per (algorithm, graph); l1 to uniform <= 0.1."""
    target = 50_000
    results = []
    for tag, g in (("k5", k5), ("planted", planted)):
        oracle = enumerate_triangles(g)
        m = g.m
        rng = make_rng(105)
        def run_ea1(r, g=g):
            return ea1_instance(iter(make_ea_stream(g, r).items), r)

        def run_ea3(r, g=g, m=m):
            s = make_ea_stream(g, r)
            return ea3_instance(iter(s.items), iter(s.items), iter(s.items), m, r)

        counts1, _ = collect_successes(run_ea1, rng, target, 40 * target, oracle)
        counts3, _ = collect_successes(run_ea3, rng, target, 40 * target, oracle)
        for algo, counts in (("ea1", counts1), ("ea3", counts3)):
            n_succ = sum(counts.values())
            l1 = l1_to_uniform(counts, oracle)
            results.append((tag, algo, n_succ, l1))
    ok = all(s >= target and l1 <= 0.1 for _, _, s, l1 in results)
    detail = "; ".join(f"{t}/{a} l1={l1:.3f}" for t, a, _, l1 in results)
    record_criterion(5, "EA conditional uniformity, l1 <= 0.1", ok, detail)
    assert ok, results


def test_criterion_06_degenerate_exactness():
    """keep_all / p=1 / kappa=1 reproduce the charge oracle exactly."""
    rng = make_rng(106)
    pairs = 0
    for _ in range(100):
        n = int(rng.integers(4, 13))
        g = gnp_graph(n, 0.4 + 0.4 * float(rng.random()), rng)
        if g.m == 0:
            continue
        s = make_al_stream(g, rng)
        T = len(enumerate_triangles(g))
        charge = charge_by_stream_order(g, s.vertex_order)
        recs = samplight_helper(iter(s.items), 0, make_rng(pairs), mode="keep_all")
        for r in recs:
            if r.flag:
                assert r.t_prime == charge.t.get(r.canonical, 0)
        params = AlgoParams(epsilon=0.5, T=max(T, 1), n=g.n, p=1.0, kappa=1.0)
        summ = sampheavy_helper(iter(s.items), params, make_rng(pairs + 1))
        xs = {canonical_edge(*r.edge): r.x for r in summ.records}
        assert xs == {e: t for e, t in charge.t.items() if t >= 1}
        assert summ.t_hat_h == T
        pairs += 1
    record_criterion(6, "helper exactness vs charge oracle", True, f"{pairs} (graph, order) pairs")
    assert pairs >= 95


def test_criterion_07_al3_distribution(k6):
    """al3 on K6 at eps=0.5 (all-light): l1 to uniform <= eps/2 + 0.05."""
    eps = 0.5
    spec = build_algo_spec("al3", k6, epsilon=eps)
    oracle = enumerate_triangles(k6)
    rng = make_rng(107)
    counts, runs = collect_successes(
        lambda r: spec.run(StreamFactory(make_al_stream(k6, r)), r).triangle,
        rng, 20_000, 200_000, oracle,
    )
    n_succ = sum(counts.values())
    l1 = l1_to_uniform(counts, oracle)
    ok = n_succ >= 20_000 and l1 <= eps / 2 + 0.05
    record_criterion(7, "al3 K6 l1 <= eps/2 + 0.05", ok, f"l1={l1:.3f} over {n_succ} successes")
    assert ok, (n_succ, l1)


def test_criterion_08_al1_distribution(k6, planted, report_bank):
    """al1 forced regimes: light l1 <= 0.1, heavy l1 <= eps + 0.1, mixed hit."""
    eps = 0.5
    results = []

    def mc(name, g, target):
        spec = report_bank[name][0]
        oracle = enumerate_triangles(g)
        rng = make_rng(108)
        counts, _ = collect_successes(
            lambda r: spec.run(StreamFactory(make_al_stream(g, r)), r).triangle,
            rng, target, 30 * target, oracle,
        )
        return sum(counts.values()), l1_to_uniform(counts, oracle), target

    for name, g, target, bound in (
        ("al1-k6-light", k6, 20_000, 0.1),
        ("al1-planted-light", planted, 10_000, 0.1),
        ("al1-k6-heavy", k6, 20_000, eps + 0.1),
        ("al1-planted-heavy", planted, 20_000, eps + 0.1),
    ):
        succ, l1, tgt = mc(name, g, target)
        results.append((name, succ >= tgt and l1 <= bound, l1))
        # forced regimes must never visit another branch
        branch = "light" if "light" in name else "heavy"
        assert report_bank[name][2].branch_counts == {branch: 300}

    mixed_rep = report_bank["al1-k6-mixed"][2]
    mixed_hits = mixed_rep.branch_counts.get("mixed", 0)
    results.append(("mixed-branch", mixed_hits >= 1, float(mixed_hits)))

    ok = all(r[1] for r in results)
    detail = "; ".join(f"{n}={v:.3f}" for n, _, v in results)
    record_criterion(8, "al1 forced-regime distributions", ok, detail)
    assert ok, results


def test_criterion_09_variant_equivalence(k6):
    """Explicit-set and weighted-reservoir variants agree; WRS heavy peak O(1)."""
    target = 50_000
    oracle = enumerate_triangles(k6)
    dists = {}
    peaks = {}
    for variant in ("al1", "al1-wrs"):
        spec = build_algo_spec(variant, k6, epsilon=0.5, p=1.0, kappa=1.0, light_slots=4)
        rng = make_rng(109)
        peak = 0
        counts = Counter()
        got = 0
        while got < target:
            res = spec.run(StreamFactory(make_al_stream(k6, rng)), rng)
            peak = max(peak, res.notes["heavy_summary_peak"])
            if res.triangle is not None:
                assert res.triangle in oracle
                counts[res.triangle] += 1
                got += 1
        dists[variant] = counts
        peaks[variant] = peak
    l1 = l1_between(dists["al1"], dists["al1-wrs"])
    ok = l1 <= 0.1 and peaks["al1-wrs"] <= 3 and peaks["al1"] > peaks["al1-wrs"]
    record_criterion(
        9, "explicit vs WRS equivalence", ok,
        f"l1={l1:.3f}, peaks explicit={peaks['al1']} wrs={peaks['al1-wrs']}",
    )
    assert ok, (l1, peaks)


def test_criterion_10_sampling_to_counting(k5, k6):
    """T recovered within +-20% from single-instance success rates."""
    results = []
    spec1 = build_algo_spec("ea1", k5, instances=1)
    est1 = estimate_T_by_sampling(spec1, k5, q=2 / k5.m ** 2, N=100_000, master_seed=110)
    results.append(("ea1-k5", est1.t_hat, 10))
    spec3 = build_algo_spec("ea3", k6, instances=1)
    q3 = 1 / (math.sqrt(2) * k6.m ** 1.5)
    est3 = estimate_T_by_sampling(spec3, k6, q=q3, N=100_000, master_seed=111)
    results.append(("ea3-k6", est3.t_hat, 20))
    ok = all(abs(t_hat - T) <= 0.2 * T for _, t_hat, T in results)
    detail = "; ".join(f"{n}: T_hat={t:.2f} (T={T})" for n, t, T in results)
    record_criterion(10, "estimate_T within +-20%", ok, detail)
    assert ok, results


# per-algorithm space budgets: the leading term of each analysis, with a
# configured constant that accounts for the per-instance item footprint
# (3 items per ea1 instance, 9 per ea3 instance, 3 per reservoir slot plus
# watch counters, and the two al1 helpers including the p*m tracked edges)
BUDGETS = {
    "ea1": (lambda g, T, p: ea1_space_bound(g.m, T), 16.0),
    "ea3": (lambda g, T, p: ea3_space_bound(g.m, T), 40.0),
    "al3": (lambda g, T, p: g.m / T ** (2 / 3), 40.0),
    "al1": (lambda g, T, p: g.m / math.sqrt(T) + p * g.m, 16.0),
    "al1-wrs": (lambda g, T, p: g.m / math.sqrt(T) + p * g.m, 16.0),
}


def test_criterion_11_space_and_pass_discipline(report_bank):
    """Peaks within c * bound * ln n; pass counts exactly as declared."""
    checks = []
    for name, (spec, g, rep) in report_bank.items():
        T = len(enumerate_triangles(g))
        algo = spec.name
        p_used = 1.0 if "heavy" in name or "mixed" in name else 0.0
        budget_fn, c = BUDGETS[algo]
        bc = space_budget_check(rep, budget_fn(g, T, p_used), g.n, c=c)
        assert rep.passes == spec.expected_passes, name
        checks.append((name, bc))
    ok = all(bc.ok for _, bc in checks)
    worst = min(checks, key=lambda kv: kv[1].margin)
    record_criterion(
        11, "space budgets and pass discipline", ok,
        f"worst margin {worst[1].margin:.2f}x at {worst[0]}",
    )
    assert ok, [(n, bc) for n, bc in checks if not bc.ok]


def test_criterion_12_determinism(report_bank):
    """Same master seed reproduces byte-identical reports."""
    same = []
    for name in ("ea1-k5", "al1-k6-heavy", "al3-k6"):
        spec, g, rep = report_bank[name]
        rerun = run_trials(spec, g, rep.trials, BANK_SEED)
        same.append(rerun.serialize() == rep.serialize())
    ok = all(same)
    record_criterion(12, "byte-identical reports per seed", ok, f"{sum(same)}/3 configs")
    assert ok
