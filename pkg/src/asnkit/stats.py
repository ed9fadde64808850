"""Classical topology statistics for aggregated syntactic networks.

Path-based quantities (clustering, average path length, diameter) follow the
usual small-world conventions: they are computed on the undirected simple
projection of the network (direction, weights, parallel arcs, and self-loops
discarded), with path metrics restricted to the largest connected component.
Degree sequences, by contrast, describe the directed simple graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import networkx as nx

from .corpus import CorpusSlice, tree_depth
from .network import Asn, NodeKey

__all__ = [
    "NetworkSummary",
    "summarize",
    "degree_sequences",
    "depth_vs_diameter",
]


@dataclass(frozen=True)
class NetworkSummary:
    """Topology summary of one network.

    ``edge_count`` counts the edges of the undirected simple projection, so
    ``average_degree == 2 * edge_count / node_count`` holds exactly;
    ``average_path_length`` and ``diameter`` describe the largest connected
    component of that projection.
    """

    node_count: int
    edge_count: int
    average_degree: float
    clustering: float
    average_path_length: float
    diameter: int
    component_count: int
    lcc_fraction: float


def _undirected_projection(asn: Asn) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(asn.frequency)
    for (u, v) in asn.edges:
        if u != v:
            graph.add_edge(u, v)
    return graph


def _largest_component(graph: nx.Graph) -> set[NodeKey]:
    """Largest connected component; size ties broken by smallest node key.

    Components are disjoint, so the minimum (role, lemma) key in each one is
    a deterministic tie-breaker.
    """
    best: set[NodeKey] | None = None
    best_rank: tuple | None = None
    for component in nx.connected_components(graph):
        rank = (-len(component), min(k.sort_key for k in component))
        if best_rank is None or rank < best_rank:
            best = component
            best_rank = rank
    assert best is not None
    return best


def summarize(asn: Asn) -> NetworkSummary:
    """Compute the topology summary of a network.

    Raises
    ------
    ValueError
        On a network with no nodes.
    """
    if asn.node_count == 0:
        raise ValueError("cannot summarize a network with no nodes")
    graph = _undirected_projection(asn)
    n = graph.number_of_nodes()
    e = graph.number_of_edges()
    average_degree = 2.0 * e / n
    clustering = float(nx.average_clustering(graph)) if n else 0.0

    components = list(nx.connected_components(graph))
    lcc = _largest_component(graph)
    sub = graph.subgraph(lcc)
    m = sub.number_of_nodes()
    if m <= 1:
        average_path_length = 0.0
        diameter = 0
    else:
        total = 0
        diameter = 0
        for source in sub.nodes:
            lengths = nx.single_source_shortest_path_length(sub, source)
            total += sum(lengths.values())
            diameter = max(diameter, max(lengths.values()))
        average_path_length = total / (m * (m - 1))
    return NetworkSummary(
        node_count=n,
        edge_count=e,
        average_degree=average_degree,
        clustering=clustering,
        average_path_length=average_path_length,
        diameter=diameter,
        component_count=len(components),
        lcc_fraction=m / n,
    )


def degree_sequences(asn: Asn) -> dict[str, list[int]]:
    """In-, out-, and total-degree multisets of the directed simple graph.

    Self-loops contribute one unit to both the in- and out-degree of their
    node.  Each multiset is returned sorted ascending; the in and out lists
    both sum to the number of directed edges.
    """
    in_deg = {k: 0 for k in asn.frequency}
    out_deg = {k: 0 for k in asn.frequency}
    for (u, v) in asn.edges:
        out_deg[u] += 1
        in_deg[v] += 1
    total = {k: in_deg[k] + out_deg[k] for k in asn.frequency}
    return {
        "in": sorted(in_deg.values()),
        "out": sorted(out_deg.values()),
        "total": sorted(total.values()),
    }


def depth_vs_diameter(
    pairs: Sequence[tuple[CorpusSlice, Asn]]
) -> list[dict[str, object]]:
    """Per-century comparison of tree depth with network path metrics.

    For each (slice, network) pair, reports the maximum dependency-tree
    depth next to the network diameter and average path length.  A diameter
    exceeding the maximum tree depth signals paths that no single sentence
    contains, i.e. lemma sharing across sentences.

    Raises
    ------
    ValueError
        If a slice is empty or a pair disagrees on the century.
    """
    rows: list[dict[str, object]] = []
    for corpus_slice, asn in pairs:
        if not corpus_slice.trees:
            raise ValueError(
                f"century {corpus_slice.century}: empty slice has no tree depth"
            )
        if asn.century != corpus_slice.century:
            raise ValueError(
                f"slice century {corpus_slice.century} does not match "
                f"network century {asn.century}"
            )
        summary = summarize(asn)
        rows.append(
            {
                "century": corpus_slice.century,
                "max_tree_depth": max(tree_depth(t) for t in corpus_slice.trees),
                "diameter": summary.diameter,
                "average_path_length": summary.average_path_length,
            }
        )
    rows.sort(key=lambda r: r["century"])
    return rows
