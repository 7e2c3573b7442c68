import heapq
import logging
import math
from dataclasses import dataclass, field
from typing import AbstractSet, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from src.engines.goodsets import MaximalGoodSet
from src.graph_core.graph import Graph
from src.graph_core.thresholds import alpha, within_slack
from src.shared.errors import PreconditionError, claim

logger = logging.getLogger(__name__)


# --- Models ---
@dataclass(frozen=True)
class Collection:
    """Maximal good sets of comparable size: 2^(i-1) <= |C| <= 2^i for all members."""
    bucket_index: int
    members: List[MaximalGoodSet]
    total_size: int
    dropped: Optional[MaximalGoodSet] = None

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class NeighborFamilies:
    """For every s in S, the collection indices owning a neighbor of s (at most k+1 kept)."""
    families: Dict[int, Tuple[int, ...]]
    truncated: FrozenSet[int] = field(default_factory=frozenset)


@dataclass(frozen=True)
class ConflictGraph:
    vertex_count: int
    edges: FrozenSet[Tuple[int, int]]

    def adjacency(self) -> List[List[int]]:
        adj: List[List[int]] = [[] for _ in range(self.vertex_count)]
        for i, j in sorted(self.edges):
            adj[i].append(j)
            adj[j].append(i)
        return adj


# --- Collection ---
def _in_bucket(size: int, i: int) -> bool:
    return 2 ** (i - 1) <= size <= 2**i


def build_collection(sets: List[MaximalGoodSet], n: int, k: int) -> Collection:
    """
    Picks the dyadic size class carrying the most vertices (ties: smaller i).
    If that class covers n or more vertices, its largest member is dropped.
    """
    if n < 2:
        raise PreconditionError(f"collection needs n >= 2, got {n}")
    a = alpha(k)
    covered = sum(m.size for m in sets)
    if covered < a * n:
        raise PreconditionError(
            f"maximal good sets cover {covered} < alpha*n = {a * n:.3f} vertices; "
            "use the few-degree-k fallback branch"
        )

    top = max(1, math.ceil(math.log2(n)))
    best_i, best_total = 1, -1
    for i in range(1, top + 1):
        total = sum(m.size for m in sets if _in_bucket(m.size, i))
        if total > best_total:
            best_i, best_total = i, total

    members = sorted((m for m in sets if _in_bucket(m.size, best_i)), key=lambda m: m.min_vertex)
    dropped = None
    if best_total >= n:
        # largest member; ties go to the one with the larger smallest vertex
        dropped = max(members, key=lambda m: (m.size, m.min_vertex))
        members = [m for m in members if m is not dropped]
        best_total -= dropped.size

    coll = Collection(bucket_index=best_i, members=members, total_size=best_total, dropped=dropped)
    claim(coll.total_size < n, "collection upper bound", f"total {coll.total_size} >= n = {n}")
    claim(
        within_slack(a * n / math.log2(n), coll.total_size),
        "collection lower bound",
        f"total {coll.total_size} < alpha*n/log2(n) = {a * n / math.log2(n):.4f}",
    )
    if members:
        sizes = [m.size for m in members]
        claim(max(sizes) <= 2 * min(sizes), "collection dyadic ratio", f"sizes {min(sizes)}..{max(sizes)}")
    logger.info(f"[Conflict] Collection: bucket {best_i}, {len(members)} sets, {coll.total_size} vertices")
    return coll


def _member_sets(coll: Union[Collection, Sequence[AbstractSet[int]]]) -> List[AbstractSet[int]]:
    if isinstance(coll, Collection):
        return [member.vertices for member in coll.members]
    return list(coll)


def collection_owner(G: Graph, coll: Union[Collection, Sequence[AbstractSet[int]]]) -> List[int]:
    """owner[v] = index of the member containing v, or -1."""
    members = _member_sets(coll)
    owner = [-1] * G.vertex_count
    for index, vertices in enumerate(members):
        for v in vertices:
            owner[v] = index
    return owner


# --- Families & Conflicts ---
def neighbor_families(
    G: Graph, coll: Union[Collection, Sequence[AbstractSet[int]]], S: Iterable[int], k: int
) -> NeighborFamilies:
    """
    C'(s) for every s in S; families larger than k+1 keep the k+1 members
    with the smallest minimum vertex.
    """
    members = _member_sets(coll)
    owner = collection_owner(G, members)
    by_min_vertex = {index: min(vertices) for index, vertices in enumerate(members)}
    families: Dict[int, Tuple[int, ...]] = {}
    truncated = set()
    for s in sorted(G.check_ids(S)):
        if owner[s] >= 0:
            raise PreconditionError(f"vertex {s} of S lies inside collection member {owner[s]}")
        indices = sorted({owner[w] for w in G.neighbors(s) if owner[w] >= 0}, key=by_min_vertex.__getitem__)
        if len(indices) > k + 1:
            indices = indices[: k + 1]
            truncated.add(s)
        families[s] = tuple(sorted(indices))
    return NeighborFamilies(families=families, truncated=frozenset(truncated))


def build_conflict_graph(coll: Union[Collection, int], fams: NeighborFamilies) -> ConflictGraph:
    """Union over s in S of a clique on C(s), one vertex per collection member."""
    member_count = len(coll) if isinstance(coll, Collection) else coll
    edges = set()
    for family in fams.families.values():
        for a_pos, i in enumerate(family):
            for j in family[a_pos + 1:]:
                edges.add((i, j) if i < j else (j, i))
    budget = sum(len(f) * (len(f) - 1) // 2 for f in fams.families.values())
    claim(len(edges) <= budget, "conflict edge count", f"{len(edges)} > {budget}")
    return ConflictGraph(vertex_count=member_count, edges=frozenset(edges))


def greedy_independent_set(A: ConflictGraph) -> List[int]:
    """
    Repeatedly takes a vertex of minimum degree (ties: smallest index) and
    deletes its closed neighborhood. The result has at least m/(2c+1)
    vertices for c = e/m.
    """
    m = A.vertex_count
    adj = A.adjacency()
    degree = [len(nbrs) for nbrs in adj]
    alive = bytearray(b"\x01") * m
    heap = [(degree[i], i) for i in range(m)]
    heapq.heapify(heap)
    chosen: List[int] = []
    while heap:
        d, i = heapq.heappop(heap)
        if not alive[i] or d != degree[i]:
            continue
        chosen.append(i)
        alive[i] = 0
        for j in adj[i]:
            if not alive[j]:
                continue
            alive[j] = 0
            for l in adj[j]:
                if alive[l]:
                    degree[l] -= 1
                    heapq.heappush(heap, (degree[l], l))

    chosen.sort()
    e = len(A.edges)
    # |IS| >= m / (2e/m + 1)  <=>  |IS| (2e + m) >= m^2
    claim(len(chosen) * (2 * e + m) >= m * m, "Turan bound", f"{len(chosen)} chosen on m={m}, e={e}")
    return chosen


def check_consumer_condition(fams: NeighborFamilies, chosen: Iterable[int]) -> Optional[int]:
    """Returns a vertex s with two chosen members in C(s), or None."""
    picked = set(chosen)
    for s, family in fams.families.items():
        if sum(1 for i in family if i in picked) > 1:
            return s
    return None
