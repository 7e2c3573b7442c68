"""
Derivation traces for good sets.

A trace is a tree whose leaves are Seed steps (rule 1) and whose inner nodes
are Absorb steps (rule 2) and Merge steps (rule 3). Every node knows the size
and the smallest vertex of the set it builds, so the halving step can walk
the tree without materializing anything.
"""
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Sequence, Set, Tuple, Union

from src.graph_core.graph import Graph, VertexSet
from src.shared.errors import PreconditionError, TraceRuleViolation


# --- Steps ---
@dataclass(frozen=True, slots=True)
class Seed:
    vertex: int

    @property
    def size(self) -> int:
        return 1

    @property
    def min_vertex(self) -> int:
        return self.vertex


@dataclass(frozen=True, slots=True)
class Absorb:
    base: "TraceNode"
    vertex: int
    size: int
    min_vertex: int


@dataclass(frozen=True, slots=True)
class Merge:
    left: "TraceNode"
    right: "TraceNode"
    via: Optional[Tuple[int, int]]  # edge u-v with u on the left, v on the right
    at: Optional[int]               # vertex shared by both sides
    size: int
    min_vertex: int


TraceNode = Union[Seed, Absorb, Merge]


def absorb(base: TraceNode, vertex: int) -> Absorb:
    return Absorb(base, vertex, base.size + 1, min(base.min_vertex, vertex))


def merge_via(left: TraceNode, right: TraceNode, u: int, v: int) -> Merge:
    """Merge of two disjoint sets joined by the edge u-v."""
    return Merge(left, right, (u, v), None, left.size + right.size, min(left.min_vertex, right.min_vertex))


def merge_at(left: TraceNode, right: TraceNode, shared: int, overlap: int = 1) -> Merge:
    return Merge(left, right, None, shared, left.size + right.size - overlap, min(left.min_vertex, right.min_vertex))


def postorder(root: TraceNode) -> Iterator[TraceNode]:
    stack: List[Tuple[TraceNode, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if isinstance(node, Seed) or expanded:
            yield node
            continue
        stack.append((node, True))
        if isinstance(node, Merge):
            stack.append((node.right, False))
            stack.append((node.left, False))
        else:
            stack.append((node.base, False))


def materialize(root: TraceNode) -> VertexSet:
    """Vertex set built by the trace, without rule checks."""
    vertices: Set[int] = set()
    stack: List[TraceNode] = [root]
    while stack:
        node = stack.pop()
        if isinstance(node, Seed):
            vertices.add(node.vertex)
        elif isinstance(node, Absorb):
            vertices.add(node.vertex)
            stack.append(node.base)
        else:
            stack.append(node.left)
            stack.append(node.right)
    return frozenset(vertices)


def half_step(node: TraceNode) -> TraceNode:
    """
    Good subset obtained by undoing the last step: an Absorb drops its vertex,
    a Merge keeps its larger side (ties: the side holding the smaller id).
    """
    if isinstance(node, Seed):
        raise PreconditionError("a singleton good set cannot be halved")
    if isinstance(node, Absorb):
        return node.base
    left, right = node.left, node.right
    if left.size != right.size:
        return left if left.size > right.size else right
    return left if left.min_vertex < right.min_vertex else right


# --- Replay ---
def replay_trace(G: Graph, k: int, trace: TraceNode) -> VertexSet:
    """
    Rebuilds the vertex set of a trace, validating every step against the
    good-set rules. Steps are numbered in post-order, matching the text form.
    """
    n = G.vertex_count
    adjacency = G.adjacency
    stack: List[Set[int]] = []

    for index, node in enumerate(postorder(trace)):
        if isinstance(node, Seed):
            v = node.vertex
            if not 0 <= v < n:
                raise TraceRuleViolation(f"seed {v} is not a vertex", index)
            if len(adjacency[v]) != k:
                raise TraceRuleViolation(f"seed {v} has degree {len(adjacency[v])}, rule 1 needs {k}", index)
            stack.append({v})
            continue

        if isinstance(node, Absorb):
            current = stack.pop()
            v = node.vertex
            if not 0 <= v < n:
                raise TraceRuleViolation(f"absorbed vertex {v} is not a vertex", index)
            if v in current:
                raise TraceRuleViolation(f"absorbed vertex {v} is already in the set", index)
            outside = sum(1 for w in adjacency[v] if w not in current)
            if outside > k - 1:
                raise TraceRuleViolation(f"vertex {v} has {outside} neighbors outside the set, rule 2 allows {k - 1}", index)
            current.add(v)
            stack.append(current)
        else:
            right = stack.pop()
            left = stack.pop()
            if node.via is not None:
                u, v = node.via
                if u not in left or v not in right:
                    raise TraceRuleViolation(f"witness edge {u}-{v} does not join the two sides", index)
                if not (0 <= u < n and v in adjacency[u]):
                    raise TraceRuleViolation(f"witness {u}-{v} is not an edge", index)
            elif node.at is not None:
                s = node.at
                if s not in left or s not in right:
                    raise TraceRuleViolation(f"witness vertex {s} is not shared by both sides", index)
                if not adjacency[s]:
                    raise TraceRuleViolation(f"shared vertex {s} is isolated, no edge meets both sides", index)
            else:
                raise TraceRuleViolation("merge without a witness", index)
            if len(left) < len(right):
                left, right = right, left
            left |= right
            stack.append(left)

        if len(stack[-1]) != node.size:
            raise TraceRuleViolation(f"step builds {len(stack[-1])} vertices, trace claims {node.size}", index)

    return frozenset(stack.pop())


# --- Text Form ---
def serialize_trace(root: TraceNode, id_map: Optional[Callable[[int], int]] = None) -> List[str]:
    """
    One step per line, post-order:
        seed v
        absorb v                         (applies to the previous line's set)
        merge <left-line> <right-line> via u v
        merge <left-line> <right-line> at v
    """
    f = id_map if id_map is not None else (lambda v: v)
    lines: List[str] = []
    line_of = {}
    for node in postorder(root):
        if isinstance(node, Seed):
            lines.append(f"seed {f(node.vertex)}")
        elif isinstance(node, Absorb):
            lines.append(f"absorb {f(node.vertex)}")
        elif node.via is not None:
            u, v = node.via
            lines.append(f"merge {line_of[id(node.left)]} {line_of[id(node.right)]} via {f(u)} {f(v)}")
        else:
            lines.append(f"merge {line_of[id(node.left)]} {line_of[id(node.right)]} at {f(node.at)}")
        line_of[id(node)] = len(lines) - 1
    return lines


def parse_trace(lines: Sequence[str], id_map: Optional[Callable[[int], int]] = None) -> TraceNode:
    """Inverse of serialize_trace. Raises PreconditionError on malformed text."""
    f = id_map if id_map is not None else (lambda v: v)
    nodes: List[TraceNode] = []
    sets: List[Optional[Set[int]]] = []
    consumed: List[bool] = []

    def take(ref: int, line_number: int) -> Tuple[TraceNode, Set[int]]:
        if not 0 <= ref < len(nodes) or consumed[ref]:
            raise PreconditionError(f"trace line {line_number}: reference {ref} is not an open step")
        consumed[ref] = True
        owned = sets[ref]
        sets[ref] = None
        return nodes[ref], owned  # type: ignore[return-value]

    for line_number, raw in enumerate(lines):
        parts = raw.split()
        try:
            if parts[0] == "seed" and len(parts) == 2:
                v = f(int(parts[1]))
                node: TraceNode = Seed(v)
                members = {v}
            elif parts[0] == "absorb" and len(parts) == 2:
                base, members = take(line_number - 1, line_number)
                v = f(int(parts[1]))
                members.add(v)
                node = Absorb(base, v, len(members), min(base.min_vertex, v))
            elif parts[0] == "merge" and len(parts) in (5, 6):
                left, left_set = take(int(parts[1]), line_number)
                right, right_set = take(int(parts[2]), line_number)
                if len(left_set) < len(right_set):
                    right_set |= left_set
                    members = right_set
                else:
                    left_set |= right_set
                    members = left_set
                lowest = min(left.min_vertex, right.min_vertex)
                if parts[3] == "via" and len(parts) == 6:
                    node = Merge(left, right, (f(int(parts[4])), f(int(parts[5]))), None, len(members), lowest)
                elif parts[3] == "at" and len(parts) == 5:
                    node = Merge(left, right, None, f(int(parts[4])), len(members), lowest)
                else:
                    raise ValueError(raw)
            else:
                raise ValueError(raw)
        except (ValueError, IndexError, KeyError) as e:
            raise PreconditionError(f"trace line {line_number}: cannot parse {raw!r}") from e
        nodes.append(node)
        sets.append(members)
        consumed.append(False)

    open_steps = [i for i, used in enumerate(consumed) if not used]
    if len(open_steps) != 1 or open_steps[0] != len(nodes) - 1:
        raise PreconditionError(f"trace does not form a single tree (open steps: {open_steps[:5]})")
    return nodes[-1]
