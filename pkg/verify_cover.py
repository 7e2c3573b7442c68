import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import complete, cycle, graph, path, star_with_ears
from src.engines.cover import build_cover_set, is_cover, phi
from src.graph_core.graph import induced_subgraph
from src.graph_core.peeling import k_core
from src.models import OracleBudget
from src.oracle.brute_force import random_cover, random_cover_check
from src.shared.errors import BudgetExceeded, PreconditionError


@st.composite
def degenerate_graphs(draw, k: int, max_n: int = 10):
    """Every vertex has at most k-1 neighbors among the earlier ones, so the k-core is empty."""
    n = draw(st.integers(min_value=1, max_value=max_n))
    edges = []
    for v in range(1, n):
        back = draw(st.sets(st.integers(min_value=0, max_value=v - 1), max_size=k - 1))
        edges.extend((u, v) for u in back)
    return graph(n, edges)


# --- Potential ---
def test_phi_examples():
    assert phi(graph(1, []), 3) == 2
    assert phi(path(3), 2) == 2
    assert phi(complete(3), 3) == 6


def test_phi_star():
    star = graph(4, [(0, 1), (0, 2), (0, 3)])
    assert phi(star, 2) == 2 * 4 - 6


# --- Construction ---
def test_cover_set_of_path():
    cert = build_cover_set(path(3), 2)
    assert cert.S == frozenset({0, 2})
    assert cert.peel_order == [0, 1, 2]
    assert len(cert.S) == cert.phi_value == 2


def test_cover_set_of_single_vertex():
    for k in (2, 3, 5):
        cert = build_cover_set(graph(1, []), k)
        assert cert.S == frozenset({0})
        assert cert.phi_value == k - 1


def test_cover_set_rejects_nonempty_core():
    with pytest.raises(PreconditionError):
        build_cover_set(cycle(4), 2)


def test_cover_set_rejects_empty_graph():
    with pytest.raises(PreconditionError):
        build_cover_set(graph(0, []), 2)


def test_cover_set_of_star_leftover():
    H = induced_subgraph(star_with_ears(), range(5))
    cert = build_cover_set(H, 2)
    assert cert.peel_order == [1, 2, 3, 0, 4]
    assert cert.S == frozenset({3, 4})
    assert cert.phi_value == 2


def test_certificate_lines():
    cert = build_cover_set(path(3), 2)
    assert cert.to_lines() == ["S: 0 2", "peel: 0 1 2"]
    assert cert.to_lines(lambda v: v + 5) == ["S: 5 7", "peel: 5 6 7"]


@settings(max_examples=50, deadline=None)
@given(st.data(), st.sampled_from([2, 3]))
def test_cover_set_size_and_placement(data, k):
    H = data.draw(degenerate_graphs(k))
    cert = build_cover_set(H, k)
    assert len(cert.S) <= phi(H, k) == cert.phi_value
    assert all(H.degree(s) <= k - 1 for s in cert.S)
    assert sorted(cert.peel_order) == list(range(H.vertex_count))


@settings(max_examples=25, deadline=None)
@given(st.data(), st.sampled_from([2, 3]), st.integers(min_value=0, max_value=2**32))
def test_every_sampled_cover_has_a_core(data, k, seed):
    H = data.draw(degenerate_graphs(k, max_n=8))
    cert = build_cover_set(H, k)
    result = random_cover_check(H, cert.S, k, OracleBudget(max_vertices=12, trial_count=30, seed=seed))
    assert result.passed, result.counterexample


# --- Covers ---
def test_triangle_covers_path():
    assert is_cover(complete(3), path(3), frozenset({0, 2}), 2)


def test_path_does_not_cover_itself_with_endpoints_in_s():
    assert not is_cover(path(3), path(3), frozenset({0, 2}), 2)
    assert is_cover(path(3), path(3), frozenset(), 2)


def test_cover_must_contain_h():
    assert not is_cover(graph(3, [(0, 1), (0, 2)]), path(3), frozenset(), 2)


def test_cover_with_embedding():
    Ht = graph(3, [(2, 1), (1, 0), (0, 2)])
    assert is_cover(Ht, path(3), frozenset({0, 2}), 2, embedding=[2, 1, 0])
    with pytest.raises(PreconditionError):
        is_cover(Ht, path(3), frozenset(), 2, embedding=[2, 2, 0])


def test_minimal_repair_is_a_cover():
    Ht = random_cover(path(3), frozenset({0, 2}), 2, rng=None)
    assert is_cover(Ht, path(3), frozenset({0, 2}), 2)
    assert Ht.edge_count == 3


# --- Randomized Check ---
def test_cover_check_passes_for_path(budget):
    result = random_cover_check(path(3), {0, 2}, 2, budget)
    assert result.passed
    assert result.trials_run == budget.trial_count
    assert result.seed == budget.seed


def test_cover_check_finds_trivial_counterexample(budget):
    result = random_cover_check(path(3), set(), 2, budget)
    assert not result.passed
    assert result.failing_trial == 0
    header, first_edge = result.counterexample.splitlines()[:2]
    assert header == f"# cover counterexample seed={budget.seed} trial=0 H: v=3 e=2 k=2 S="
    assert not first_edge.startswith("#")


def test_cover_check_trivial_when_h_has_core(budget):
    result = random_cover_check(cycle(4), {0}, 2, budget)
    assert result.passed
    assert result.trials_run == 0


def test_cover_check_respects_budget():
    with pytest.raises(BudgetExceeded):
        random_cover_check(path(13), {0}, 2, OracleBudget(max_vertices=12))


def test_cover_check_is_reproducible():
    H = graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    budget = OracleBudget(trial_count=20, seed=99)
    assert random_cover_check(H, {4}, 2, budget) == random_cover_check(H, {4}, 2, budget)
    assert not k_core(H, 2)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
