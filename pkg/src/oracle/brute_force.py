"""
Exhaustive and randomized oracles for desk-scale graphs.

Everything here is deliberately naive: these functions are the ground truth
the engines are compared against, so they share no code with them beyond the
graph type and the k-core.
"""
import logging
from typing import Iterable, List, Optional, Set

import numpy as np

from src.graph_core.graph import Graph, VertexSet
from src.graph_core.peeling import k_core
from src.models import CoverCheckResult, OracleBudget
from src.shared.errors import BudgetExceeded, ClaimViolation

logger = logging.getLogger(__name__)


def _check_budget(count: int, budget: OracleBudget, what: str) -> None:
    if count > budget.max_vertices:
        raise BudgetExceeded(f"{what} has {count} vertices, the oracle budget allows {budget.max_vertices}")


# --- Minimum Subgraph ---
def min_order_mindeg_subgraph(G: Graph, k: int, budget: OracleBudget) -> Optional[VertexSet]:
    """
    Smallest vertex set inducing minimum degree >= k (ties: lexicographically
    smallest), or None. Only subsets of the k-core are searched.
    """
    core = sorted(k_core(G, k))
    _check_budget(len(core), budget, f"the {k}-core")
    if not core:
        return None
    adjacency = G.adjacency
    for size in range(k + 1, len(core) + 1):
        found = _first_subset(adjacency, core, size, k)
        if found is not None:
            logger.debug(f"[Oracle] k={k}: minimum order {size}")
            return frozenset(found)
    raise ClaimViolation("k-core minimum degree", "no subset of the k-core qualifies")


def _first_subset(adjacency, candidates: List[int], size: int, k: int) -> Optional[List[int]]:
    """Lexicographic backtracking over `size`-subsets with degree-feasibility pruning."""
    chosen: List[int] = []

    def feasible(next_index: int) -> bool:
        slots = size - len(chosen)
        rest = candidates[next_index:]
        for u in chosen:
            inside = sum(1 for w in chosen if w in adjacency[u])
            reachable = sum(1 for w in rest if w in adjacency[u])
            if inside + min(slots, reachable) < k:
                return False
        return True

    def extend(start: int) -> bool:
        if len(chosen) == size:
            return True
        slots = size - len(chosen)
        for i in range(start, len(candidates) - slots + 1):
            v = candidates[i]
            chosen.append(v)
            if feasible(i + 1) and extend(i + 1):
                return True
            chosen.pop()
        return False

    return list(chosen) if extend(0) else None


# --- Good Sets ---
def brute_good_closure(G: Graph, k: int, budget: OracleBudget) -> List[VertexSet]:
    """
    Maximal good sets by blind rule application: start from the degree-k
    singletons and apply a randomly chosen applicable absorb or merge step
    until none is left. Isolated vertices never join a set.
    """
    _check_budget(G.vertex_count, budget, "the graph")
    rng = np.random.default_rng(budget.seed)
    adjacency = G.adjacency
    family: List[Set[int]] = [{v} for v in range(G.vertex_count) if len(adjacency[v]) == k]

    def touching(A: Set[int], B: Set[int]) -> bool:
        if A & B:
            return True
        return any(adjacency[u] & B for u in A)

    while True:
        steps = []
        for i, A in enumerate(family):
            for v in range(G.vertex_count):
                if v in A or not adjacency[v]:
                    continue
                if sum(1 for w in adjacency[v] if w not in A) <= k - 1:
                    steps.append(("absorb", i, v))
            for j in range(i + 1, len(family)):
                if touching(A, family[j]):
                    steps.append(("merge", i, j))
        if not steps:
            break
        kind, i, x = steps[int(rng.integers(len(steps)))]
        if kind == "absorb":
            family[i] = family[i] | {x}
        else:
            family[i] = family[i] | family[x]
            del family[x]
        # identical sets collapse into one
        unique: List[Set[int]] = []
        for A in family:
            if A not in unique:
                unique.append(A)
        family = unique

    return sorted((frozenset(A) for A in family), key=min)


# --- Covers ---
def random_cover(H: Graph, S: VertexSet, k: int, rng: Optional[np.random.Generator]) -> Graph:
    """
    A supergraph of H (H keeps ids 0..v_H-1) in which every vertex of degree
    <= k-1 lies in V(H) minus S. With rng=None the smallest repair is used:
    deficient vertices pair up, lowest ids first, and no optional edges are added.
    """
    n = H.vertex_count
    adjacency: List[Set[int]] = [set(nbrs) for nbrs in H.adjacency]
    fresh_cap = 2 * k + 2

    def add_vertex() -> int:
        adjacency.append(set())
        return len(adjacency) - 1

    def must_reach_k(x: int) -> bool:
        return x >= n or x in S

    if rng is not None:
        for _ in range(int(rng.integers(0, k + 1))):
            u = int(rng.integers(len(adjacency)))
            if rng.random() < 0.25 and len(adjacency) - n < fresh_cap:
                w = add_vertex()
            else:
                w = int(rng.integers(len(adjacency)))
            if u != w:
                adjacency[u].add(w)
                adjacency[w].add(u)

    while True:
        deficient = [x for x in range(len(adjacency)) if must_reach_k(x) and len(adjacency[x]) < k]
        if not deficient:
            break
        x = deficient[0]
        options = [y for y in range(len(adjacency)) if y != x and y not in adjacency[x]]
        if rng is None:
            preferred = [y for y in options if y in deficient]
            partner = (preferred or options or [add_vertex()])[0]
        elif not options or (rng.random() < 0.2 and len(adjacency) - n < fresh_cap):
            partner = add_vertex()
        else:
            partner = options[int(rng.integers(len(options)))]
        adjacency[x].add(partner)
        adjacency[partner].add(x)

    return Graph([frozenset(s) for s in adjacency], validate=False)


def random_cover_check(H: Graph, S: Iterable[int], k: int, budget: OracleBudget) -> CoverCheckResult:
    """
    Builds budget.trial_count covers of (H, S, k) and checks each has a
    nonempty k-core. Trial 0 is the minimal repair, later trials are random,
    each seeded from (budget.seed, trial). Reports the first failing trial.
    """
    _check_budget(H.vertex_count, budget, "H")
    S_set = H.check_ids(S)
    if k_core(H, k):
        return CoverCheckResult(passed=True, trials_run=0, seed=budget.seed)

    for trial in range(budget.trial_count):
        rng = None if trial == 0 else np.random.default_rng([budget.seed, trial])
        Ht = random_cover(H, S_set, k, rng)
        if not k_core(Ht, k):
            header = (
                f"cover counterexample seed={budget.seed} trial={trial} "
                f"H: v={H.vertex_count} e={H.edge_count} k={k} S={','.join(map(str, sorted(S_set)))}"
            )
            logger.warning(f"[Oracle] Cover check failed on trial {trial} (seed {budget.seed})")
            return CoverCheckResult(
                passed=False,
                trials_run=trial + 1,
                seed=budget.seed,
                failing_trial=trial,
                counterexample=Ht.to_edge_list(header=header),
            )
    return CoverCheckResult(passed=True, trials_run=budget.trial_count, seed=budget.seed)
