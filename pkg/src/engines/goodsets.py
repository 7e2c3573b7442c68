import heapq
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.engines.traces import (
    Seed,
    TraceNode,
    absorb,
    half_step,
    materialize,
    merge_at,
    merge_via,
)
from src.graph_core.graph import Graph, VertexSet
from src.shared.errors import PreconditionError, claim

logger = logging.getLogger(__name__)


# --- Models ---
@dataclass(frozen=True)
class MaximalGoodSet:
    vertices: VertexSet
    trace: TraceNode

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def min_vertex(self) -> int:
        return min(self.vertices)


class DisjointSets:
    """
    Union by rank with path compression over dense integer elements.
    Every element starts as its own singleton; `attach` hangs a fresh one
    under an existing root.
    """
    def __init__(self, capacity: int):
        self.parent: List[int] = list(range(capacity))
        self.rank: List[int] = [0] * capacity

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def attach(self, x: int, root: int) -> None:
        """Hangs a fresh singleton x under an existing root."""
        self.parent[x] = root

    def union(self, x: int, y: int) -> int:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return rx
        if self.rank[rx] < self.rank[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        if self.rank[rx] == self.rank[ry]:
            self.rank[rx] += 1
        return rx


# --- Engine ---
class GoodSetEngine:
    """
    Closure fixpoint for the good-set rules.

    Sets live in a union-find keyed by member vertices. Each set keeps its
    boundary: outside vertices adjacent to it, with the number of neighbors
    they have inside. A vertex w becomes absorbable into a set once
    deg(w) - count <= k-1. Pending merges (edges between two sets) are always
    applied before the next absorption; ties go to the lowest priority, which
    is the vertex id unless a shuffled order is requested.
    """
    def __init__(self, G: Graph, k: int, order_seed: Optional[int] = None):
        if k < 2:
            raise PreconditionError(f"k must be >= 2, got {k}")
        self.G = G
        self.k = k
        n = G.vertex_count
        self.degree = G.degrees()
        if order_seed is None:
            self.priority: List[int] = list(range(n))
        else:
            perm = np.random.default_rng(order_seed).permutation(n)
            self.priority = [0] * n
            for rank, v in enumerate(perm.tolist()):
                self.priority[v] = rank

        self.member = bytearray(n)
        self.sets = DisjointSets(n)
        self.trace: Dict[int, TraceNode] = {}
        self.boundary: Dict[int, Dict[int, int]] = {}
        self.merge_heap: List[Tuple[int, int, int, int]] = []
        self.absorb_heap: List[Tuple[int, int, int]] = []
        self.merge_count = 0
        self.absorb_count = 0
        self._low_cursor = 0
        self._glue_target: Optional[int] = None
        self._glue_order: Optional[List[int]] = None
        self._glue_index = 0

    # --- Bookkeeping ---
    def _touch(self, root: int, u: int, w: int) -> None:
        """u just joined `root`; account for its neighbor w."""
        if self.member[w]:
            if self.sets.find(w) != root:
                pu, pw = self.priority[u], self.priority[w]
                key = (pu, pw) if pu < pw else (pw, pu)
                heapq.heappush(self.merge_heap, (key[0], key[1], u, w))
            return
        counts = self.boundary[root]
        c = counts.get(w, 0) + 1
        counts[w] = c
        if self.degree[w] - c <= self.k - 1:
            heapq.heappush(self.absorb_heap, (self.priority[w], w, root))

    def _seed(self, v: int) -> None:
        self.member[v] = 1
        self.trace[v] = Seed(v)
        self.boundary[v] = {}
        for w in self.G.neighbors(v):
            self._touch(v, v, w)

    def _absorb(self, v: int, root: int) -> None:
        self.member[v] = 1
        self.sets.attach(v, root)
        self.trace[root] = absorb(self.trace[root], v)
        counts = self.boundary[root]
        counts.pop(v, None)
        for w in self.G.neighbors(v):
            self._touch(root, v, w)
        self.absorb_count += 1

    def _join(self, ra: int, rb: int, node: TraceNode) -> int:
        ba = self.boundary.pop(ra)
        bb = self.boundary.pop(rb)
        del self.trace[ra]
        del self.trace[rb]
        root = self.sets.union(ra, rb)
        small, big = (ba, bb) if len(ba) < len(bb) else (bb, ba)
        member = self.member
        threshold = self.k - 1
        for w, c in small.items():
            if member[w]:
                continue
            total = big.get(w, 0) + c
            big[w] = total
            if self.degree[w] - total <= threshold:
                heapq.heappush(self.absorb_heap, (self.priority[w], w, root))
        self.boundary[root] = big
        self.trace[root] = node
        self.merge_count += 1
        return root

    def _drain_merges(self) -> None:
        find = self.sets.find
        while self.merge_heap:
            _, _, u, w = heapq.heappop(self.merge_heap)
            ru, rw = find(u), find(w)
            if ru == rw:
                continue
            self._join(ru, rw, merge_via(self.trace[ru], self.trace[rw], u, w))

    def _glue_low_degree(self, low: List[int]) -> bool:
        """
        Vertices of degree 1..k-1 satisfy rule 2 for every good set, so they
        join any set, and two sets sharing one of them merge. Returns True
        when a step was taken. Membership only grows, so both passes resume
        where the previous call stopped.
        """
        if not self.trace or not low:
            return False
        find = self.sets.find
        if self._glue_target is None:
            self._glue_target = min(self.trace, key=lambda r: self.trace[r].min_vertex)

        member = self.member
        while self._low_cursor < len(low) and member[low[self._low_cursor]]:
            self._low_cursor += 1
        if self._low_cursor < len(low):
            v = low[self._low_cursor]
            heapq.heappush(self.absorb_heap, (self.priority[v], v, find(self._glue_target)))
            return True

        if self._glue_order is None:
            self._glue_order = sorted(self.trace, key=lambda r: self.trace[r].min_vertex)
        shared = low[0]
        ra = find(shared)
        while self._glue_index < len(self._glue_order):
            rb = find(self._glue_order[self._glue_index])
            self._glue_index += 1
            if rb != ra:
                right = absorb(self.trace[rb], shared)
                self._join(ra, rb, merge_at(self.trace[ra], right, shared))
                return True
        return False

    # --- Fixpoint ---
    def run(self) -> List[MaximalGoodSet]:
        k = self.k
        priority = self.priority
        degree = self.degree
        seeds = sorted((v for v in range(self.G.vertex_count) if degree[v] == k), key=priority.__getitem__)
        low = sorted((v for v in range(self.G.vertex_count) if 1 <= degree[v] <= k - 1), key=priority.__getitem__)

        for v in seeds:
            self._seed(v)
            self._drain_merges()

        while True:
            self._drain_merges()
            if self.absorb_heap:
                _, v, root = heapq.heappop(self.absorb_heap)
                if not self.member[v]:
                    self._absorb(v, self.sets.find(root))
                continue
            if self._glue_low_degree(low):
                continue
            break

        groups: Dict[int, List[int]] = {}
        find = self.sets.find
        for v in range(self.G.vertex_count):
            if self.member[v]:
                groups.setdefault(find(v), []).append(v)

        result = [MaximalGoodSet(frozenset(vs), self.trace[r]) for r, vs in groups.items()]
        result.sort(key=lambda m: m.min_vertex)
        logger.info(
            f"[GoodSets] k={k}: {len(seeds)} seeds -> {len(result)} maximal sets "
            f"({self.merge_count} merges, {self.absorb_count} absorptions)"
        )
        return result


def maximal_good_sets(G: Graph, k: int, order_seed: Optional[int] = None) -> List[MaximalGoodSet]:
    """
    All maximal good sets of G, ordered by smallest vertex. Pass `order_seed`
    to process candidates in a shuffled order (the family does not change).
    """
    family = GoodSetEngine(G, k, order_seed).run()
    check_family(G, k, family)
    return family


def check_family(G: Graph, k: int, family: List[MaximalGoodSet]) -> None:
    """Asserts disjointness, absence of cross edges and the edge bound."""
    owner: Dict[int, int] = {}
    for index, m in enumerate(family):
        claim(m.trace.size == len(m.vertices), "trace size", f"set {index}: trace {m.trace.size} vs {len(m.vertices)}")
        for v in m.vertices:
            claim(v not in owner, "good sets disjoint", f"vertex {v} in sets {owner.get(v)} and {index}")
            owner[v] = index
    for index, m in enumerate(family):
        for u in m.vertices:
            for w in G.neighbors(u):
                other = owner.get(w)
                claim(other is None or other == index, "good sets non-adjacent", f"edge {u}-{w} joins sets {index} and {other}")
    for v in G.vertices_of_degree(k):
        claim(v in owner, "degree-k coverage", f"degree-{k} vertex {v} lies in no maximal good set")

    mindeg = G.min_degree()
    if mindeg is not None and mindeg >= k:
        for m in family:
            meeting = edges_meeting(G, m.vertices)
            claim(meeting <= (k - 1) * m.size + 1, "good-set edge budget", f"set of size {m.size} meets {meeting} edges")


# --- Set Operations ---
def edges_meeting(G: Graph, C: VertexSet) -> int:
    """Number of edges with at least one endpoint in C."""
    members = C if isinstance(C, (set, frozenset)) else frozenset(C)
    total = 0
    for u in members:
        for w in G.neighbors(u):
            if w not in members or u < w:
                total += 1
    return total


def half_subset(G: Graph, k: int, m: MaximalGoodSet) -> Tuple[VertexSet, TraceNode]:
    """Good subset C' of C with |C|/2 <= |C'| <= |C|-1, by undoing the last trace step."""
    if m.size < 2:
        raise PreconditionError("half_subset needs a good set of size >= 2")
    node = half_step(m.trace)
    vertices = materialize(node)
    claim(2 * len(vertices) >= m.size and len(vertices) <= m.size - 1, "halving window", f"{m.size} -> {len(vertices)}")
    claim(vertices <= m.vertices, "halving containment")
    return vertices, node


def shrink_node(m: MaximalGoodSet, lo: float, hi: float) -> TraceNode:
    """
    Trace node of the first halving-chain set whose size drops to <= hi.
    The last halving starts above floor(hi) and keeps at least half, so the
    window must satisfy floor(hi) >= 2*ceil(lo) - 2.
    """
    if m.size < lo:
        raise PreconditionError(f"good set of size {m.size} is below the window [{lo}, {hi}]")
    if m.size > hi:
        if hi < 1:
            raise PreconditionError(f"upper end {hi} of the window is below 1")
        if math.floor(hi) < 2 * math.ceil(lo) - 2:
            raise PreconditionError(f"window [{lo}, {hi}] is too narrow for halving")
    node = m.trace
    while node.size > hi:
        node = half_step(node)
    claim(node.size >= lo, "halving lower bound", f"landed on {node.size} below {lo}")
    return node


def shrink_to_range(G: Graph, k: int, m: MaximalGoodSet, lo: float, hi: float) -> VertexSet:
    """Repeated halving until the size is at most hi; the result is at least lo."""
    return materialize(shrink_node(m, lo, hi))
