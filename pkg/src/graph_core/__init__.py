from src.graph_core.graph import Graph, VertexSet, induced_subgraph, load_graph
from src.graph_core.peeling import PeelResult, k_core, peel
from src.graph_core.thresholds import alpha, size_bound, t_threshold, threshold_formula, within_slack

__all__ = [
    "Graph",
    "VertexSet",
    "induced_subgraph",
    "load_graph",
    "PeelResult",
    "k_core",
    "peel",
    "alpha",
    "size_bound",
    "t_threshold",
    "threshold_formula",
    "within_slack",
]
