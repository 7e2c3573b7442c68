import sys

import pytest
from hypothesis import given, settings

from conftest import complete, cycle, cycle_edges, graph, small_graphs, wheel_with_chord
from src.graph_core.peeling import k_core
from src.instances.generators import gen_wheel
from src.models import OracleBudget
from src.oracle.brute_force import brute_good_closure, min_order_mindeg_subgraph
from src.shared.errors import BudgetExceeded


# --- Minimum Subgraph ---
def test_minimum_of_cycle(budget):
    assert min_order_mindeg_subgraph(cycle(5), 2, budget) == frozenset(range(5))


def test_minimum_of_complete_graph_is_lexicographic(budget):
    assert min_order_mindeg_subgraph(complete(5), 3, budget) == frozenset({0, 1, 2, 3})


def test_minimum_of_wheel_with_chord(budget):
    assert min_order_mindeg_subgraph(wheel_with_chord(), 3, budget) == frozenset({0, 1, 2, 3})


def test_minimum_absent(budget):
    assert min_order_mindeg_subgraph(graph(4, [(0, 1), (1, 2), (2, 3)]), 2, budget) is None


@pytest.mark.parametrize("k,n", [(2, 7), (3, 7), (4, 8)])
def test_wheels_have_no_proper_subgraph(k, n, budget):
    # the extremal graphs: minimum degree k and nothing smaller qualifies
    assert min_order_mindeg_subgraph(gen_wheel(k, n), k, budget) == frozenset(range(n))


def test_minimum_respects_budget():
    with pytest.raises(BudgetExceeded):
        min_order_mindeg_subgraph(cycle(13), 2, OracleBudget(max_vertices=12))


def test_budget_counts_the_core_only():
    # 20 vertices, but only the triangle survives the peel
    G = graph(20, [(0, 1), (1, 2), (2, 0)] + [(i, i + 1) for i in range(2, 19)])
    assert min_order_mindeg_subgraph(G, 2, OracleBudget(max_vertices=5)) == frozenset({0, 1, 2})


@settings(max_examples=40, deadline=None)
@given(small_graphs(max_n=10))
def test_minimum_lies_in_core_and_qualifies(G):
    best = min_order_mindeg_subgraph(G, 2, OracleBudget(max_vertices=10))
    core = k_core(G, 2)
    if not core:
        assert best is None
        return
    assert best <= core
    assert G.induced_min_degree(best) >= 2
    assert len(best) >= 3


# --- Good-Set Closure ---
def test_closure_examples(budget):
    assert brute_good_closure(cycle(5), 2, budget) == [frozenset(range(5))]
    two = graph(10, cycle_edges(5) + cycle_edges(5, offset=5))
    assert brute_good_closure(two, 2, budget) == [frozenset(range(5)), frozenset(range(5, 10))]
    assert brute_good_closure(complete(5), 2, budget) == []


def test_closure_respects_budget():
    with pytest.raises(BudgetExceeded):
        brute_good_closure(cycle(13), 2, OracleBudget(max_vertices=12))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
