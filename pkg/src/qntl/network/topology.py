"""Seeded network topology generation and a text interchange format.

Six families are supported: three deterministic lattices (grid, hexagonal,
tree) built with networkx, and three random families (Erdos-Renyi, Waxman,
Barabasi-Albert) generated here so that edge sets depend only on (seed, kind)
and this package's own stream discipline, never on library internals.

Nodes are integers 0..n-1.  Edges are stored normalized (u < v) and sorted,
and the adjacency map is derived from them, so two topologies with equal
fields behave identically everywhere downstream.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping

import networkx as nx
import numpy as np

from ..stats import stream

__all__ = [
    "TopologyKind",
    "NodeInfo",
    "Topology",
    "DEFAULT_PARAMS",
    "generate_topology",
    "mark_untrusted",
    "export_topology",
    "import_topology",
]


class TopologyKind(str, Enum):
    GRID = "grid"
    ERDOS_RENYI = "erdos-renyi"
    WAXMAN = "waxman"
    HEXAGONAL = "hexagonal"
    TREE = "tree"
    BARABASI_ALBERT = "barabasi-albert"


# Size parameters give roughly hundred-node networks across all families.
DEFAULT_PARAMS: dict[TopologyKind, dict[str, float | int]] = {
    TopologyKind.GRID: {"rows": 10, "cols": 10},
    TopologyKind.ERDOS_RENYI: {"n": 100, "p": 0.2},
    TopologyKind.WAXMAN: {"n": 100, "alpha": 0.1, "beta": 0.4},
    TopologyKind.HEXAGONAL: {"rows": 6, "cols": 7},
    TopologyKind.TREE: {"height": 4, "branching": 3},
    TopologyKind.BARABASI_ALBERT: {"n": 100, "k": 3},
}


@dataclass(frozen=True)
class NodeInfo:
    """Per-node bookkeeping: trust flag plus the two link-quality figures the
    trust-weighted router consumes."""

    node_id: int
    trusted: bool = True
    error_rate: float = 0.0
    response_time_ms: float = 0.0

    def __post_init__(self) -> None:
        if self.error_rate < 0.0 or self.response_time_ms < 0.0:
            raise ValueError("quality figures must be >= 0")


@dataclass(frozen=True, eq=False)
class Topology:
    """An immutable node/edge set with derived adjacency."""

    kind: TopologyKind
    seed: int
    nodes: Mapping[int, NodeInfo]
    edges: tuple[tuple[int, int], ...]
    adjacency: Mapping[int, tuple[int, ...]] = field(init=False)

    def __post_init__(self) -> None:
        nodes = dict(self.nodes)
        normalized: list[tuple[int, int]] = []
        seen: set[tuple[int, int]] = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if u not in nodes or v not in nodes:
                raise ValueError(f"edge ({u}, {v}) references an unknown node")
            edge = (u, v) if u < v else (v, u)
            if edge in seen:
                raise ValueError(f"duplicate edge {edge}")
            seen.add(edge)
            normalized.append(edge)
        normalized.sort()
        adjacency: dict[int, list[int]] = {node_id: [] for node_id in nodes}
        for u, v in normalized:
            adjacency[u].append(v)
            adjacency[v].append(u)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", tuple(normalized))
        object.__setattr__(
            self, "adjacency", {k: tuple(sorted(v)) for k, v in adjacency.items()}
        )

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def neighbors(self, node_id: int) -> tuple[int, ...]:
        return self.adjacency[node_id]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._edge_set()

    def _edge_set(self) -> frozenset[tuple[int, int]]:
        cached = getattr(self, "_edge_set_cache", None)
        if cached is None:
            cached = frozenset(self.edges)
            object.__setattr__(self, "_edge_set_cache", cached)
        return cached


def _lattice_edges(kind: TopologyKind, params: Mapping[str, int]) -> tuple[int, list[tuple[int, int]]]:
    """Deterministic lattice families, relabeled to 0..n-1 by sorted position."""
    if kind is TopologyKind.GRID:
        graph = nx.grid_2d_graph(int(params["rows"]), int(params["cols"]))
    elif kind is TopologyKind.HEXAGONAL:
        graph = nx.hexagonal_lattice_graph(int(params["rows"]), int(params["cols"]))
    else:
        graph = nx.balanced_tree(int(params["branching"]), int(params["height"]))
    labels = {old: i for i, old in enumerate(sorted(graph.nodes()))}
    edges = [(labels[u], labels[v]) for u, v in graph.edges()]
    return len(labels), edges


def _erdos_renyi_edges(n: int, p: float, rng: np.random.Generator) -> list[tuple[int, int]]:
    iu, iv = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return list(zip(iu[keep].tolist(), iv[keep].tolist()))


def _waxman_edges(n: int, alpha: float, beta: float, rng: np.random.Generator) -> list[tuple[int, int]]:
    # Nodes scatter uniformly in the unit square; a pair at distance d links
    # with probability alpha * exp(-d / (beta * L)), L the network diameter.
    positions = rng.random((n, 2))
    iu, iv = np.triu_indices(n, k=1)
    deltas = positions[iu] - positions[iv]
    dists = np.hypot(deltas[:, 0], deltas[:, 1])
    scale = float(dists.max())
    probs = alpha * np.exp(-dists / (beta * scale))
    keep = rng.random(iu.size) < probs
    return list(zip(iu[keep].tolist(), iv[keep].tolist()))


def _preferential_edges(n: int, k: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Degree-preferential attachment: a (k+1)-clique seed, then each new node
    links to k distinct existing nodes chosen proportionally to degree."""
    if n < k + 2:
        raise ValueError(f"need at least k + 2 = {k + 2} nodes, got {n}")
    edges = [(u, v) for u in range(k + 1) for v in range(u + 1, k + 1)]
    degrees = np.zeros(n, dtype=np.int64)
    degrees[: k + 1] = k
    for new in range(k + 1, n):
        targets: set[int] = set()
        while len(targets) < k:
            cumulative = np.cumsum(degrees[:new])
            pick = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
            targets.add(pick)
        for t in sorted(targets):
            edges.append((t, new))
            degrees[t] += 1
        degrees[new] = k
    return edges


def generate_topology(
    kind: TopologyKind | str,
    seed: int,
    params: Mapping[str, float | int] | None = None,
    *,
    error_rate_range: tuple[float, float] | None = None,
    response_time_range: tuple[float, float] | None = None,
) -> Topology:
    """Build a topology of the given family from its own labeled stream.

    ``params`` overrides the family defaults and rejects unknown keys.  The
    optional quality ranges draw per-node uniform error rates and response
    times (in node-id order, after the edge set), which the trust-weighted
    router uses; omitted ranges leave the figures at zero.
    """
    kind = TopologyKind(kind)
    merged = dict(DEFAULT_PARAMS[kind])
    for key, value in (params or {}).items():
        if key not in merged:
            allowed = ", ".join(sorted(merged))
            raise ValueError(f"unknown parameter {key!r} for {kind.value}; expected {allowed}")
        merged[key] = value
    rng = stream(seed, f"topology:{kind.value}")

    if kind in (TopologyKind.GRID, TopologyKind.HEXAGONAL, TopologyKind.TREE):
        n, edges = _lattice_edges(kind, merged)
    elif kind is TopologyKind.ERDOS_RENYI:
        n = int(merged["n"])
        edges = _erdos_renyi_edges(n, float(merged["p"]), rng)
    elif kind is TopologyKind.WAXMAN:
        n = int(merged["n"])
        edges = _waxman_edges(n, float(merged["alpha"]), float(merged["beta"]), rng)
    else:
        n = int(merged["n"])
        edges = _preferential_edges(n, int(merged["k"]), rng)

    error_rates = np.zeros(n)
    response_times = np.zeros(n)
    if error_rate_range is not None:
        lo, hi = (float(error_rate_range[0]), float(error_rate_range[1]))
        if not 0.0 <= lo <= hi:
            raise ValueError("error rate range must satisfy 0 <= lo <= hi")
        error_rates = rng.uniform(lo, hi, size=n)
    if response_time_range is not None:
        lo, hi = (float(response_time_range[0]), float(response_time_range[1]))
        if not 0.0 <= lo <= hi:
            raise ValueError("response time range must satisfy 0 <= lo <= hi")
        response_times = rng.uniform(lo, hi, size=n)

    nodes = {
        i: NodeInfo(
            node_id=i,
            trusted=True,
            error_rate=float(error_rates[i]),
            response_time_ms=float(response_times[i]),
        )
        for i in range(n)
    }
    return Topology(kind=kind, seed=int(seed), nodes=nodes, edges=tuple(edges))


def mark_untrusted(topology: Topology, node_ids: Iterable[int]) -> Topology:
    """Copy of the topology with the listed nodes flagged untrusted."""
    flagged = set(int(x) for x in node_ids)
    unknown = flagged - set(topology.nodes)
    if unknown:
        raise ValueError(f"unknown node ids: {sorted(unknown)}")
    nodes = {
        node_id: (replace(info, trusted=False) if node_id in flagged else info)
        for node_id, info in topology.nodes.items()
    }
    return Topology(kind=topology.kind, seed=topology.seed, nodes=nodes, edges=topology.edges)


def export_topology(topology: Topology) -> str:
    """Serialize to the line-oriented text format.

    Layout: one header line, one ``edge`` line per edge in sorted order, one
    ``node`` line per node in id order.  Floats are written with repr, so
    export -> import -> export is byte-identical.  Generation parameters are
    not carried; the node and edge lists are the complete description.
    """
    lines = [f"nodes {topology.n_nodes} kind {topology.kind.value} seed {topology.seed}"]
    for u, v in topology.edges:
        lines.append(f"edge {u} {v}")
    for node_id in sorted(topology.nodes):
        info = topology.nodes[node_id]
        lines.append(
            f"node {node_id} trusted {int(info.trusted)} "
            f"err {info.error_rate!r} rt {info.response_time_ms!r}"
        )
    return "\n".join(lines) + "\n"


def import_topology(text: str) -> Topology:
    """Parse the text format produced by :func:`export_topology`."""
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty topology document")
    header = lines[0].split()
    if len(header) != 6 or header[0] != "nodes" or header[2] != "kind" or header[4] != "seed":
        raise ValueError(f"malformed header: {lines[0]!r}")
    declared = int(header[1])
    kind = TopologyKind(header[3])
    seed = int(header[5])
    nodes: dict[int, NodeInfo] = {}
    edges: list[tuple[int, int]] = []
    for line in lines[1:]:
        parts = line.split()
        if parts[0] == "node":
            if len(parts) != 8 or parts[2] != "trusted" or parts[4] != "err" or parts[6] != "rt":
                raise ValueError(f"malformed node line: {line!r}")
            node_id = int(parts[1])
            if node_id in nodes:
                raise ValueError(f"duplicate node {node_id}")
            nodes[node_id] = NodeInfo(
                node_id=node_id,
                trusted=bool(int(parts[3])),
                error_rate=float(parts[5]),
                response_time_ms=float(parts[7]),
            )
        elif parts[0] == "edge":
            if len(parts) != 3:
                raise ValueError(f"malformed edge line: {line!r}")
            edges.append((int(parts[1]), int(parts[2])))
        else:
            raise ValueError(f"unknown line type: {line!r}")
    if len(nodes) != declared:
        raise ValueError(f"header declares {declared} nodes, found {len(nodes)}")
    return Topology(kind=kind, seed=seed, nodes=nodes, edges=tuple(edges))
