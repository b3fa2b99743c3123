"""Acceptance criteria, one reported ``[PASS]``/``[FAIL]`` line each.

Run alone with ``pytest tests/test_acceptance.py -s`` to see the lines as
they happen; a summary section is printed at the end of any run.
"""

import os
import random
import statistics
import time

import pytest

from ctrlmode.alter import STAGES, apply_and_verify, to_centralized, to_distributed
from ctrlmode.control import CENTRALIZED, DISTRIBUTED, classify, components
from ctrlmode.digraph import read_edge_list, remove_edges
from ctrlmode.generate import GenParams, generate
from ctrlmode.matching import has_augmenting_path, maximum_matching
from ctrlmode.oracle import enumerate_matchings
from ctrlmode.sweep import SweepConfig, run_sweep

from .conftest import random_digraph

P_EDGE = [round(0.1 * i, 1) for i in range(1, 10)]


def test_oracle_equivalence(criterion):
    rng = random.Random(20240601)
    start = time.perf_counter()
    checked = bad = 0
    for _ in range(1200):
        g = random_digraph(rng, rng.randint(1, 8), rng.choice(P_EDGE), loops=True)
        c = classify(g, maximum_matching(g))
        r = enumerate_matchings(g)
        checked += 1
        if c.nu != r.nu or c.is_input != r.ever_unmatched:
            bad += 1
    elapsed = time.perf_counter() - start
    criterion(
        "1 oracle equivalence",
        bad == 0 and checked >= 1000 and elapsed < 60,
        f"{checked} graphs, {bad} disagreements, {elapsed:.1f}s",
    )


def test_theorem_suite(criterion):
    start = time.perf_counter()
    graphs = plans = bad = 0
    for k in range(2, 11):
        for seed in range(25):
            g = generate(GenParams(100, k, seed=seed))
            plan = to_centralized(g)
            graphs += 1
            if plan.is_noop:
                continue
            plans += 1
            g2 = remove_edges(g, plan.edges)
            c2 = classify(g2, maximum_matching(g2))
            ok = (
                c2.nu == plan.before.nu
                and not has_augmenting_path(g2, plan.matching)
                and not (plan.flipped & c2.input_nodes)
            )
            bad += not ok
    elapsed = time.perf_counter() - start
    criterion(
        "2 edge-removal theorem (to_centralized)",
        bad == 0 and graphs >= 200 and elapsed < 60,
        f"{graphs} graphs, {plans} non-empty plans, {bad} violations, {elapsed:.1f}s",
    )


def _distributed_sources():
    rng = random.Random(7)
    seed = 0
    while True:
        yield random_digraph(rng, rng.randint(5, 60), rng.choice([0.02, 0.05, 0.1, 0.2]))
        yield generate(GenParams(200, rng.choice([2, 4, 6, 8, 10]), seed=seed))
        seed += 1


def test_distributed_suite(criterion):
    start = time.perf_counter()
    graphs = bad = 0
    for g in _distributed_sources():
        if graphs >= 240:
            break
        m = maximum_matching(g)
        c = classify(g, m)
        if not c.redundant_nodes:
            continue
        graphs += 1
        plan = to_distributed(g)
        g2 = remove_edges(g, plan.edges)
        c2 = classify(g2, maximum_matching(g2))
        ranks = [STAGES.index(s) for _, s in plan.removals]
        ok = (
            c2.nu == c.nu - 1
            and c2.n_input > c.n_input
            and ranks == sorted(ranks)
            and len(set(plan.edges)) == len(plan.edges)
        )
        bad += not ok
    elapsed = time.perf_counter() - start
    criterion(
        "3 redundant-to-input suite (to_distributed)",
        bad == 0 and graphs >= 200,
        f"{graphs} graphs with redundant nodes, {bad} violations, {elapsed:.1f}s",
    )


def test_matching_invariance(criterion):
    rng = random.Random(99)
    graphs = bad = 0
    for i in range(240):
        if i % 2:
            g = random_digraph(rng, rng.randint(1, 120), rng.choice([0.01, 0.03, 0.1, 0.3]), loops=True)
        else:
            g = generate(GenParams(300, rng.choice([2, 5, 10, 20]), seed=i))
        a = classify(g, maximum_matching(g, "ascending"))
        b = classify(g, maximum_matching(g, "descending"))
        graphs += 1
        bad += a.is_input != b.is_input
    criterion("4 matching invariance", bad == 0 and graphs >= 200, f"{graphs} graphs, {bad} differ")


@pytest.mark.slow
def test_dense_efficiency(criterion):
    start = time.perf_counter()
    seed = 0
    while True:
        g = generate(GenParams(10_000, 15, seed=seed))
        c = classify(g, maximum_matching(g))
        if c.mode == DISTRIBUTED:
            break
        seed += 1
    report, _ = apply_and_verify(g, to_centralized(g))
    elapsed = time.perf_counter() - start
    criterion(
        "5 dense efficiency (to_centralized)",
        report.p <= 0.01 and report.delta_nd >= 0.6 and elapsed < 30,
        f"seed {seed}, i_d {c.i_d:.3f}, p {report.p:.5f}, delta_nd {report.delta_nd:.3f}, {elapsed:.1f}s",
    )


@pytest.mark.slow
def test_dense_efficiency_other_direction(criterion):
    # supplementary: a centralized dense graph switched the other way
    start = time.perf_counter()
    seed = 0
    while True:
        g = generate(GenParams(10_000, 15, seed=seed))
        c = classify(g, maximum_matching(g))
        if c.mode == CENTRALIZED:
            break
        seed += 1
    report, _ = apply_and_verify(g, to_distributed(g))
    elapsed = time.perf_counter() - start
    criterion(
        "5b dense efficiency (to_distributed)",
        report.p <= 0.01 and report.delta_nd >= 0.6 and elapsed < 30,
        f"seed {seed}, i_d {c.i_d:.3f}, p {report.p:.5f}, delta_nd {report.delta_nd:.3f}, {elapsed:.1f}s",
    )


@pytest.mark.slow
def test_sparse_efficiency(criterion):
    start = time.perf_counter()
    ps, deltas, modes = [], [], []
    for seed in range(10):
        g = generate(GenParams(10_000, 6, seed=seed))
        c = classify(g, maximum_matching(g))
        plan = to_centralized(g) if c.mode == DISTRIBUTED else to_distributed(g)
        report, _ = apply_and_verify(g, plan)
        ps.append(report.p)
        deltas.append(report.delta_nd)
        modes.append(c.mode[0])
    elapsed = time.perf_counter() - start
    mp, md = statistics.mean(ps), statistics.mean(deltas)
    criterion(
        "6 sparse efficiency",
        mp <= 0.12 and md >= 0.15 and elapsed < 120,
        f"modes {''.join(modes)}, mean p {mp:.4f}, mean delta_nd {md:.3f}, {elapsed:.1f}s",
    )


@pytest.mark.slow
def test_sweep_bimodality(criterion):
    start = time.perf_counter()
    records = run_sweep(SweepConfig())
    elapsed = time.perf_counter() - start
    by_k = {}
    for r in records:
        by_k.setdefault(r.k_target, []).append(r)
    ks = sorted(by_k)
    nd = [statistics.mean(r.n_d for r in by_k[k]) for k in ks]
    decreasing = all(a > b for a, b in zip(nd, nd[1:]))
    at30 = [r.i_d for r in by_k[30.0]]
    split = any(v > 0.7 for v in at30) and any(v < 0.3 for v in at30)
    criterion(
        "7 N_D trend and I_D bimodality",
        len(records) == 160 and decreasing and split and elapsed < 300,
        f"mean N_D {[round(x, 5) for x in nd]}, I_D at k=30 min {min(at30):.3f} max {max(at30):.3f}, {elapsed:.1f}s",
    )
    # the efficiency trend over the paper's plotted range, reported alongside
    eff = []
    for k in ks:
        vals = [r.efficiency for r in by_k[k] if r.efficiency is not None]
        eff.append(statistics.mean(vals) if vals else 0.0)
    low = [e for k, e in zip(ks, eff) if k <= 25]
    criterion(
        "7b efficiency grows with <k> over [5, 25]",
        all(a < b for a, b in zip(low, low[1:])),
        f"mean delta_nd/p {[round(e, 1) for e in eff]}",
    )
    criterion("9b desk-scale sweep runtime", elapsed < 300, f"{elapsed:.1f}s for 160 cells")


def test_table_regression(criterion):
    path = os.environ.get("CTRLMODE_S208A")
    if not path:
        pytest.skip("set CTRLMODE_S208A to an s208a edge list to run this check")
    g = read_edge_list(path)
    c = classify(g, maximum_matching(g))
    criterion(
        "8 s208a driver density",
        (g.n, len(c.drivers)) == (122, 29) and round(100 * c.n_d, 2) == 23.77,
        f"n {g.n}, L {g.m}, drivers {len(c.drivers)}, n_mds {100 * c.n_d:.2f}%",
    )


@pytest.mark.slow
def test_classify_performance(criterion):
    g = generate(GenParams(100_000, 20, seed=0))
    start = time.perf_counter()
    m = maximum_matching(g)
    c = classify(g, m)
    components(g, m, c)
    elapsed = time.perf_counter() - start
    criterion(
        "9 classify at n=1e5, L=1e6",
        g.m == 1_000_000 and elapsed < 30,
        f"matching + classify + components {elapsed:.1f}s",
    )
