"""
Acceptance-scale runs. Deselected by default; run with `pytest -m slow`.
"""
import sys
import time

import numpy as np
import pytest

from conftest import graph
from src.engines.conflict import ConflictGraph, greedy_independent_set
from src.engines.cover import build_cover_set, phi
from src.engines.goodsets import maximal_good_sets
from src.graph_core.peeling import k_core
from src.graph_core.thresholds import size_bound, t_threshold
from src.instances.generators import gen_extremal_plus_one, gen_random_with_edges, gen_wheel
from src.models import OracleBudget
from src.oracle.brute_force import brute_good_closure, min_order_mindeg_subgraph, random_cover_check
from src.pipeline.extraction import extract
from src.pipeline.verification import verify_certificate

N = 2**20


def degenerate_graph(rng, n, k):
    """Each vertex picks at most k-1 earlier neighbors, so the k-core is empty."""
    edges = []
    for v in range(1, n):
        back = rng.choice(v, size=int(rng.integers(0, min(k - 1, v) + 1)), replace=False)
        edges.extend((int(u), v) for u in back)
    return graph(n, edges)


# --- Generators ---
@pytest.mark.slow
def test_wheels_sit_exactly_on_the_threshold():
    for k in range(2, 7):
        for n in range(k + 2, 501):
            W = gen_wheel(k, n)
            assert W.edge_count == t_threshold(k, n), (k, n)
            assert W.min_degree() == k, (k, n)


@pytest.mark.slow
@pytest.mark.parametrize("k", [3, 4, 5])
def test_wheels_are_minimal(k):
    budget = OracleBudget(max_vertices=12)
    for n in range(k + 2, 13):
        assert min_order_mindeg_subgraph(gen_wheel(k, n), k, budget) == frozenset(range(n)), n


# --- Extraction ---
@pytest.mark.slow
def test_soundness_corpus():
    rng = np.random.default_rng(2024)
    failures = []
    for index in range(10_000):
        k = int(rng.integers(2, 5))
        seed = int(rng.integers(2**32))
        if index % 2:
            n = int(rng.integers(k + 3, 41))
            G = gen_extremal_plus_one(k, n, seed=seed)
        else:
            n = int(rng.integers(k + 2, 41))
            room = n * (n - 1) // 2 - t_threshold(k, n) - 1
            G = gen_random_with_edges(n, t_threshold(k, n) + 1 + int(rng.integers(0, room + 1)), seed)
        result = extract(G, k)
        assert result.subgraph and G.induced_min_degree(result.subgraph) >= k
        report = verify_certificate(G, k, result)
        if not report.passed:
            failures.append((index, k, n, seed, [c.name for c in report.failures()]))
    assert failures == []


@pytest.mark.slow
@pytest.mark.parametrize("k", [2, 3])
def test_extremal_plus_one_at_scale(k):
    G = gen_extremal_plus_one(k, N, seed=2024)
    started = time.perf_counter()
    result = extract(G, k)
    elapsed = time.perf_counter() - started

    assert result.order <= N - size_bound(k, N, "main")
    assert result.order <= N - size_bound(k, N, "sqrt")
    assert result.order <= N - {2: 54, 3: 13}[k]
    assert G.induced_min_degree(result.subgraph) >= k
    report = verify_certificate(G, k, result)
    assert report.passed, [c.name for c in report.failures()]
    assert elapsed < 120


# --- Covers ---
@pytest.mark.slow
def test_cover_suite():
    rng = np.random.default_rng(7)
    for index in range(1_000):
        k = int(rng.integers(2, 4))
        H = degenerate_graph(rng, int(rng.integers(1, 13)), k)
        assert not k_core(H, k)
        cert = build_cover_set(H, k)
        assert len(cert.S) <= phi(H, k)
        result = random_cover_check(H, cert.S, k, OracleBudget(max_vertices=12, trial_count=100, seed=index))
        assert result.passed, result.counterexample


# --- Selection ---
@pytest.mark.slow
def test_turan_bound_on_random_conflict_graphs():
    rng = np.random.default_rng(11)
    for _ in range(1_000):
        m = int(rng.integers(1, 60))
        p = rng.random()
        edges = frozenset((i, j) for i in range(m) for j in range(i + 1, m) if rng.random() < p)
        chosen = greedy_independent_set(ConflictGraph(m, edges))
        assert len(chosen) * (2 * len(edges) + m) >= m * m


# --- Oracle Equivalence ---
@pytest.mark.slow
def test_engine_matches_closure_and_ignores_order():
    rng = np.random.default_rng(3)
    budget = OracleBudget(max_vertices=12)
    for _ in range(1_000):
        k = int(rng.integers(2, 5))
        n = int(rng.integers(1, 13))
        m = int(rng.integers(0, n * (n - 1) // 2 + 1))
        G = gen_random_with_edges(n, m, int(rng.integers(2**32)))
        family = sorted((s.vertices for s in maximal_good_sets(G, k)), key=min)
        assert family == brute_good_closure(G, k, budget)
        for shuffle in range(100):
            assert sorted((s.vertices for s in maximal_good_sets(G, k, order_seed=shuffle)), key=min) == family


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-m", "slow"]))
