import math
import sys

import pytest
from pydantic import ValidationError

from src.graph_core.graph import load_graph
from src.graph_core.thresholds import t_threshold
from src.instances.generators import (
    gen_extremal_plus_one,
    gen_random_with_edges,
    gen_wheel,
    generate,
    render,
)
from src.models import GenSpec, OracleBudget
from src.oracle.brute_force import min_order_mindeg_subgraph
from src.shared.errors import PreconditionError


# --- Wheels ---
@pytest.mark.parametrize("k,n,edges", [(3, 6, 10), (2, 8, 8), (4, 10, 25)])
def test_wheel_edge_counts(k, n, edges):
    W = gen_wheel(k, n)
    assert W.vertex_count == n
    assert W.edge_count == edges == t_threshold(k, n)
    assert W.min_degree() == k


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_wheel_apexes_see_everything(k):
    for n in range(k + 2, 40):
        W = gen_wheel(k, n)
        assert [W.degree(a) for a in range(k - 2)] == [n - 1] * (k - 2), n
        assert all(W.degree(v) == k for v in range(k - 2, n)), n


def test_wheel_rejects_small_n():
    with pytest.raises(PreconditionError, match="complete graph"):
        gen_wheel(3, 4)
    with pytest.raises(PreconditionError):
        gen_wheel(3, 3)


def test_wheel_plus_one():
    G = gen_extremal_plus_one(3, 6, seed=1)
    assert G.edge_count == 11
    assert G.min_degree() == 3


def test_wheel_plus_one_is_seeded():
    a = gen_extremal_plus_one(2, 12, seed=42)
    b = gen_extremal_plus_one(2, 12, seed=42)
    assert list(a.edges()) == list(b.edges())
    assert a.edge_count == 13


def test_wheel_plus_one_needs_a_non_edge():
    with pytest.raises(PreconditionError):
        gen_extremal_plus_one(3, 4, seed=0)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_wheel_plus_one_has_smaller_subgraph(k):
    budget = OracleBudget(max_vertices=12)
    for n in range(k + 2, 13):
        for seed in range(3):
            G = gen_extremal_plus_one(k, n, seed=seed)
            best = min_order_mindeg_subgraph(G, k, budget)
            assert best is not None and len(best) < n, (n, seed)
            assert G.induced_min_degree(best) >= k


# --- Random ---
def test_random_forced_complete():
    G = gen_random_with_edges(5, 10, seed=3)
    assert G.edge_count == 10 == math.comb(5, 2)


def test_random_empty():
    G = gen_random_with_edges(5, 0, seed=3)
    assert (G.vertex_count, G.edge_count) == (5, 0)


def test_random_is_seeded():
    assert list(gen_random_with_edges(6, 7, seed=9).edges()) == list(gen_random_with_edges(6, 7, seed=9).edges())


def test_random_rejects_too_many_edges():
    with pytest.raises(PreconditionError):
        gen_random_with_edges(4, 7, seed=0)


def test_random_sparse_path_on_large_n():
    # above the dense pair limit the sampler draws pairs one at a time
    G = gen_random_with_edges(2000, 50, seed=4)
    assert (G.vertex_count, G.edge_count) == (2000, 50)


# --- Specs ---
def test_spec_edge_targets():
    assert GenSpec(kind="random-hypothesis", k=3, n=6).edge_target() == 11
    assert GenSpec(kind="random-hypothesis", k=3, n=6, edges=2).edge_target() == 13
    assert GenSpec(kind="random-fixed-edges", k=2, n=6, edges=4).edge_target() == 4
    assert GenSpec(kind="wheel", k=3, n=6).edge_target() is None


def test_spec_validation():
    with pytest.raises(ValidationError):
        GenSpec(kind="random-fixed-edges", k=2, n=6)
    with pytest.raises(ValidationError):
        GenSpec(kind="wheel", k=4, n=4)
    with pytest.raises(ValidationError):
        GenSpec(kind="random-fixed-edges", k=2, n=4, edges=7)


def test_generate_random_hypothesis_meets_threshold():
    G = generate(GenSpec(kind="random-hypothesis", k=3, n=9, seed=2))
    assert G.edge_count == t_threshold(3, 9) + 1


def test_render_round_trip():
    spec = GenSpec(kind="wheel", k=4, n=10, seed=0)
    text = render(spec, generate(spec))
    assert text.startswith("# gen kind=wheel k=4 n=10 seed=0\n")
    assert load_graph(text).edge_count == 25


if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
