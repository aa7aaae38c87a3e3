"""Path counting and route selection.

The viability metric counts minimum-hop paths that avoid compromised nodes,
optionally under a hop budget; it is the quantity whose decay the
untrusted-node experiment tracks.  Routing offers three policies with fully
deterministic tie-breaking, so a route is a pure function of the topology
and inputs.
"""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import AbstractSet, Mapping

from .instant import InstantTopology
from .topology import NodeInfo, Topology

__all__ = [
    "RoutePolicyKind",
    "RoutingPolicy",
    "count_viable_paths",
    "hop_distance",
    "route",
]


class RoutePolicyKind(str, Enum):
    SHORTEST_HOP = "shortest-hop"
    TRUST_WEIGHTED = "trust-weighted"
    PRUNE_COMPROMISED = "prune-compromised"


@dataclass(frozen=True)
class RoutingPolicy:
    """Route selection policy.

    shortest-hop walks greedily toward the target, always taking the
    lowest-numbered neighbor that stays on a shortest path.  trust-weighted
    minimizes the summed advertised weight of intermediate nodes (weight =
    error rate + response time / ``response_time_scale``), breaking ties by
    hop count and then lexicographically.  prune-compromised is shortest-hop
    over trusted nodes only.
    """

    kind: RoutePolicyKind
    response_time_scale: float = 100.0

    def __post_init__(self) -> None:
        if self.response_time_scale <= 0.0:
            raise ValueError("response time scale must be positive")

    @classmethod
    def shortest_hop(cls) -> "RoutingPolicy":
        return cls(RoutePolicyKind.SHORTEST_HOP)

    @classmethod
    def trust_weighted(cls, response_time_scale: float = 100.0) -> "RoutingPolicy":
        return cls(RoutePolicyKind.TRUST_WEIGHTED, response_time_scale)

    @classmethod
    def prune_compromised(cls) -> "RoutingPolicy":
        return cls(RoutePolicyKind.PRUNE_COMPROMISED)


def _adjacency(graph: Topology | InstantTopology) -> Mapping[int, tuple[int, ...]]:
    if isinstance(graph, InstantTopology):
        return {node: graph.live_neighbors(node) for node in graph.base.nodes}
    return graph.adjacency


def _base(graph: Topology | InstantTopology) -> Topology:
    return graph.base if isinstance(graph, InstantTopology) else graph


def _bfs_distances(
    adjacency: Mapping[int, tuple[int, ...]],
    start: int,
    blocked: AbstractSet[int],
) -> dict[int, int]:
    dist = {start: 0}
    frontier = deque([start])
    while frontier:
        node = frontier.popleft()
        for nbr in adjacency[node]:
            if nbr in blocked or nbr in dist:
                continue
            dist[nbr] = dist[node] + 1
            frontier.append(nbr)
    return dist


def hop_distance(graph: Topology | InstantTopology, source: int, target: int) -> int:
    """Minimum hop count between two nodes, or -1 when disconnected."""
    dist = _bfs_distances(_adjacency(graph), int(source), frozenset())
    return dist.get(int(target), -1)


def count_viable_paths(
    graph: Topology | InstantTopology,
    source: int,
    target: int,
    compromised: AbstractSet[int] = frozenset(),
    hop_bound: int | None = None,
) -> int:
    """Count minimum-hop paths from source to target through safe nodes.

    Compromised intermediates are excluded; a compromised endpoint makes the
    question meaningless and raises.  When ``hop_bound`` is given and even
    the best safe path exceeds it, the count is zero: detours longer than
    the budget are not viable.  Counting uses the layered-BFS recurrence
    (ways[v] = sum of ways over predecessors one hop closer), so it stays
    polynomial even when the count itself is astronomically large.
    """
    source = int(source)
    target = int(target)
    blocked = frozenset(int(x) for x in compromised)
    if source in blocked or target in blocked:
        raise ValueError("source and target must not themselves be compromised")
    adjacency = _adjacency(graph)
    if source not in adjacency or target not in adjacency:
        raise ValueError("source and target must be nodes of the topology")
    if source == target:
        return 1
    dist = _bfs_distances(adjacency, source, blocked)
    if target not in dist:
        return 0
    if hop_bound is not None and dist[target] > int(hop_bound):
        return 0
    order = sorted(dist, key=lambda node: dist[node])
    ways = {source: 1}
    for node in order:
        if node == source:
            continue
        ways[node] = sum(
            ways.get(nbr, 0)
            for nbr in adjacency[node]
            if nbr in dist and dist[nbr] == dist[node] - 1
        )
    return ways[target]


def _greedy_shortest(
    adjacency: Mapping[int, tuple[int, ...]],
    source: int,
    target: int,
    blocked: AbstractSet[int],
) -> list[int] | None:
    """Lexicographically smallest minimum-hop path, built as a greedy walk
    down the BFS distance field from the target."""
    dist_to_target = _bfs_distances(adjacency, target, blocked)
    if source not in dist_to_target:
        return None
    path = [source]
    node = source
    while node != target:
        node = min(
            nbr
            for nbr in adjacency[node]
            if nbr not in blocked and dist_to_target.get(nbr, -1) == dist_to_target[node] - 1
        )
        path.append(node)
    return path


def _node_weight(
    info_map: Mapping[int, NodeInfo],
    node: int,
    scale: float,
    advertised: Mapping[int, float] | None,
) -> float:
    if advertised is not None and node in advertised:
        return float(advertised[node])
    info = info_map[node]
    return info.error_rate + info.response_time_ms / scale


def _dijkstra_trust(
    adjacency: Mapping[int, tuple[int, ...]],
    nodes: Mapping[int, NodeInfo],
    source: int,
    target: int,
    scale: float,
    advertised: Mapping[int, float] | None,
) -> list[int] | None:
    """Minimum summed weight over intermediate nodes; ties fall to hop count,
    then to the lexicographically smallest node sequence."""
    start = (0.0, 0, (source,))
    heap = [start]
    settled: set[int] = set()
    while heap:
        weight, hops, path = heapq.heappop(heap)
        node = path[-1]
        if node == target:
            return list(path)
        if node in settled:
            continue
        settled.add(node)
        for nbr in adjacency[node]:
            if nbr in settled:
                continue
            step = 0.0 if nbr == target else _node_weight(nodes, nbr, scale, advertised)
            heapq.heappush(heap, (weight + step, hops + 1, path + (nbr,)))
    return None


def route(
    graph: Topology | InstantTopology,
    source: int,
    target: int,
    policy: RoutingPolicy,
    advertised_weights: Mapping[int, float] | None = None,
) -> list[int] | None:
    """Select a route under the given policy, or None when unreachable.

    ``advertised_weights`` models nodes lying about their quality figures: it
    overrides the trust-weighted cost of the listed nodes and is ignored by
    the other policies (they never consult weights).
    """
    source = int(source)
    target = int(target)
    adjacency = _adjacency(graph)
    if source not in adjacency or target not in adjacency:
        raise ValueError("source and target must be nodes of the topology")
    if source == target:
        return [source]
    if policy.kind is RoutePolicyKind.SHORTEST_HOP:
        return _greedy_shortest(adjacency, source, target, frozenset())
    if policy.kind is RoutePolicyKind.PRUNE_COMPROMISED:
        info = _base(graph).nodes
        blocked = frozenset(
            node for node, meta in info.items() if not meta.trusted and node != source
        )
        if target in blocked:
            return None
        return _greedy_shortest(adjacency, source, target, blocked)
    return _dijkstra_trust(
        adjacency,
        _base(graph).nodes,
        source,
        target,
        policy.response_time_scale,
        advertised_weights,
    )
