"""Instantaneous link state over a base topology.

Entanglement links are not standing infrastructure: each one exists only for
the window in which a fresh pair sits in both end nodes' memories.  An
instant topology is one sample of that window, and end-to-end connection
attempts consume swap randomness along a chosen path.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .topology import Topology

__all__ = ["InstantTopology", "sample_instant_topology", "establish_e2e"]


@dataclass(frozen=True, eq=False)
class InstantTopology:
    """One snapshot: the base graph plus the subset of links currently live."""

    base: Topology
    live_links: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        extra = self.live_links - set(self.base.edges)
        if extra:
            raise ValueError(f"live links not present in the base topology: {sorted(extra)}")

    def is_live(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.live_links

    def live_neighbors(self, node_id: int) -> tuple[int, ...]:
        return tuple(
            nbr for nbr in self.base.neighbors(node_id) if self.is_live(node_id, nbr)
        )

    @property
    def n_live(self) -> int:
        return len(self.live_links)


def sample_instant_topology(
    topology: Topology,
    link_up_probability: float,
    rng: np.random.Generator,
) -> InstantTopology:
    """Draw one snapshot: each edge is live independently.

    Consumes exactly one uniform per edge, in sorted edge order, so snapshots
    are reproducible for a fixed generator state.
    """
    p = float(link_up_probability)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"link probability must lie in [0, 1], got {p}")
    draws = rng.random(len(topology.edges))
    live = frozenset(edge for edge, u in zip(topology.edges, draws) if u < p)
    return InstantTopology(base=topology, live_links=live)


def establish_e2e(
    instant: InstantTopology,
    path: Sequence[int],
    swap_success_prob: float,
    rng: np.random.Generator,
) -> bool:
    """Attempt an end-to-end connection along ``path`` by entanglement swaps.

    Every intermediate node performs one swap; all len(path) - 2 swaps fire
    simultaneously, so the attempt consumes one uniform per intermediate even
    when an early swap fails.  Requesting a path with a dead or missing link
    is a caller error and raises.
    """
    p = float(swap_success_prob)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"swap probability must lie in [0, 1], got {p}")
    nodes = [int(x) for x in path]
    if len(nodes) < 2:
        raise ValueError("path needs at least two nodes")
    if len(set(nodes)) != len(nodes):
        raise ValueError("path must not revisit a node")
    for u, v in zip(nodes, nodes[1:]):
        if not instant.is_live(u, v):
            raise ValueError(f"link ({u}, {v}) is not live in this snapshot")
    n_swaps = len(nodes) - 2
    if n_swaps == 0:
        return True
    return bool(np.all(rng.random(n_swaps) < p))
