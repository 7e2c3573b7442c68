import logging
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from src.shared.errors import GraphFormatError, PreconditionError

logger = logging.getLogger(__name__)

VertexSet = FrozenSet[int]
Edge = Tuple[int, int]


# --- Graph ---
class Graph:
    """
    Simple undirected graph on dense ids 0..n-1.

    Immutable after construction. Every vertex keeps its original label, and
    graphs produced by induced_subgraph remember the id each vertex had in the
    root graph (`origin`), so certificates can always be reported in the ids
    of the graph the user loaded.
    """
    __slots__ = ("_adjacency", "_labels", "_origin", "_edge_count", "duplicate_edges")

    def __init__(
        self,
        adjacency: Sequence[FrozenSet[int]],
        labels: Optional[Sequence[str]] = None,
        origin: Optional[Sequence[int]] = None,
        duplicate_edges: int = 0,
        validate: bool = True,
    ):
        self._adjacency: Tuple[FrozenSet[int], ...] = tuple(adjacency)
        n = len(self._adjacency)
        if labels is None:
            labels = [str(v) for v in range(n)]
        if len(labels) != n:
            raise PreconditionError(f"{len(labels)} labels for {n} vertices")
        if origin is not None and len(origin) != n:
            raise PreconditionError(f"origin map has {len(origin)} entries for {n} vertices")
        self._labels: Tuple[str, ...] = tuple(labels)
        self._origin: Optional[Tuple[int, ...]] = tuple(origin) if origin is not None else None
        self.duplicate_edges = duplicate_edges

        degree_sum = 0
        for v, nbrs in enumerate(self._adjacency):
            degree_sum += len(nbrs)
            if validate:
                if v in nbrs:
                    raise PreconditionError(f"self-loop at vertex {v}")
                for w in nbrs:
                    if not 0 <= w < n or v not in self._adjacency[w]:
                        raise PreconditionError(f"adjacency not symmetric at edge {v}-{w}")
        self._edge_count = degree_sum // 2

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Edge], labels: Optional[Sequence[str]] = None) -> "Graph":
        adjacency: List[set] = [set() for _ in range(vertex_count)]
        duplicates = 0
        for u, v in edges:
            if u == v:
                raise PreconditionError(f"self-loop at vertex {u}")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise PreconditionError(f"edge {u}-{v} out of range for {vertex_count} vertices")
            if v in adjacency[u]:
                duplicates += 1
                continue
            adjacency[u].add(v)
            adjacency[v].add(u)
        return cls(
            [frozenset(s) for s in adjacency],
            labels=labels,
            duplicate_edges=duplicates,
            validate=False,
        )

    # --- Basic Queries ---
    @property
    def vertex_count(self) -> int:
        return len(self._adjacency)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    @property
    def labels(self) -> Tuple[str, ...]:
        return self._labels

    @property
    def origin(self) -> Optional[Tuple[int, ...]]:
        return self._origin

    @property
    def adjacency(self) -> Tuple[FrozenSet[int], ...]:
        return self._adjacency

    def __len__(self) -> int:
        return len(self._adjacency)

    def __repr__(self) -> str:
        return f"Graph(n={self.vertex_count}, m={self.edge_count})"

    def neighbors(self, v: int) -> FrozenSet[int]:
        return self._adjacency[v]

    def degree(self, v: int) -> int:
        return len(self._adjacency[v])

    def degrees(self) -> List[int]:
        return [len(nbrs) for nbrs in self._adjacency]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adjacency[u]

    def edges(self) -> Iterator[Edge]:
        for u, nbrs in enumerate(self._adjacency):
            for v in sorted(nbrs):
                if u < v:
                    yield (u, v)

    def min_degree(self) -> Optional[int]:
        if not self._adjacency:
            return None
        return min(len(nbrs) for nbrs in self._adjacency)

    def vertices_of_degree(self, i: int) -> List[int]:
        """V_i(G)."""
        return [v for v, nbrs in enumerate(self._adjacency) if len(nbrs) == i]

    def vertices_at_most(self, i: int) -> List[int]:
        """V_{<=i}(G)."""
        return [v for v, nbrs in enumerate(self._adjacency) if len(nbrs) <= i]

    # --- Ids ---
    def root_ids(self, vertices: Iterable[int]) -> List[int]:
        if self._origin is None:
            return sorted(vertices)
        origin = self._origin
        return sorted(origin[v] for v in vertices)

    def check_ids(self, vertices: Iterable[int]) -> VertexSet:
        n = self.vertex_count
        result = frozenset(vertices)
        for v in result:
            if not isinstance(v, int) or not 0 <= v < n:
                raise PreconditionError(f"vertex id {v!r} out of range for {n} vertices")
        return result

    def induced_edge_count(self, vertices: Iterable[int]) -> int:
        members = vertices if isinstance(vertices, (set, frozenset)) else set(vertices)
        total = 0
        for v in members:
            for w in self._adjacency[v]:
                if w in members:
                    total += 1
        return total // 2

    def induced_min_degree(self, vertices: Iterable[int]) -> Optional[int]:
        members = vertices if isinstance(vertices, (set, frozenset)) else set(vertices)
        if not members:
            return None
        return min(sum(1 for w in self._adjacency[v] if w in members) for v in members)

    # --- Serialization ---
    def to_edge_list(self, header: Optional[str] = None) -> str:
        lines: List[str] = []
        if header:
            lines.extend(f"# {line}" for line in header.splitlines())
        labels = self._labels
        for u, v in self.edges():
            lines.append(f"{labels[u]} {labels[v]}")
        return "\n".join(lines) + "\n"


# --- Loading ---
def load_graph(text: str) -> Graph:
    """
    Parses edge-list text: one edge per line, two whitespace-separated labels.
    Blank lines and lines starting with '#' are ignored. Labels get dense ids
    in first-appearance order; duplicate edges are dropped and counted.
    """
    index: Dict[str, int] = {}
    labels: List[str] = []
    adjacency: List[set] = []
    duplicates = 0

    def intern(label: str) -> int:
        v = index.get(label)
        if v is None:
            v = len(labels)
            index[label] = v
            labels.append(label)
            adjacency.append(set())
        return v

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"expected two vertex labels, got {len(parts)} field(s): {line!r}", line_number)
        a, b = parts
        if a == b:
            raise GraphFormatError(f"self-loop on vertex {a!r}", line_number)
        u, v = intern(a), intern(b)
        if v in adjacency[u]:
            duplicates += 1
            continue
        adjacency[u].add(v)
        adjacency[v].add(u)

    if duplicates:
        logger.warning(f"[Load] Dropped {duplicates} duplicate edge(s)")

    return Graph(
        [frozenset(s) for s in adjacency],
        labels=labels,
        duplicate_edges=duplicates,
        validate=False,
    )


def induced_subgraph(G: Graph, W: Iterable[int]) -> Graph:
    """
    Graph on W (renumbered in increasing id order) with exactly the edges of G
    inside W. Labels and root ids are carried over.
    """
    members = G.check_ids(W)
    order = sorted(members)
    position = [-1] * G.vertex_count
    for new_id, old in enumerate(order):
        position[old] = new_id

    adjacency = G.adjacency
    new_adjacency = [
        frozenset(position[w] for w in adjacency[old] if position[w] >= 0)
        for old in order
    ]
    labels = G.labels
    origin = G.origin
    return Graph(
        new_adjacency,
        labels=[labels[old] for old in order],
        origin=[origin[old] for old in order] if origin is not None else order,
        validate=False,
    )
