"""Network-level experiments: path decay under node compromise, and route
diversion by a node that lies about its quality figures.

The decay experiment measures how the number of viable minimum-hop paths
between random endpoint pairs falls as a growing fraction of nodes becomes
untrusted.  Compromise sets are nested (prefixes of one per-trial
permutation), and viability carries the intact-path hop budget, so each
sampled pair's count is non-increasing in the fraction by construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .paths import RoutingPolicy, count_viable_paths, hop_distance, route
from .topology import Topology, TopologyKind, generate_topology

__all__ = [
    "DecayRow",
    "DecayTable",
    "untrusted_node_experiment",
    "DiversionPair",
    "DiversionResult",
    "diversion_experiment",
]

AGGREGATE_DISTANCE = -1


@dataclass(frozen=True)
class DecayRow:
    """Mean viable-path count for one (family, fraction) cell.

    ``distance`` is the intact hop distance bin, or -1 for the aggregate over
    all sampled pairs.
    """

    kind: str
    fraction: float
    distance: int
    mean_count: float
    std_count: float
    samples: int


@dataclass(frozen=True, eq=False)
class DecayTable:
    rows: tuple[DecayRow, ...]

    def aggregate(self, kind: str, fraction: float) -> DecayRow:
        for row in self.rows:
            if row.kind == kind and row.fraction == fraction and row.distance == AGGREGATE_DISTANCE:
                return row
        raise KeyError(f"no aggregate row for ({kind!r}, {fraction!r})")

    def by_distance(self, kind: str, fraction: float) -> list[DecayRow]:
        return sorted(
            (
                row
                for row in self.rows
                if row.kind == kind and row.fraction == fraction
                and row.distance != AGGREGATE_DISTANCE
            ),
            key=lambda row: row.distance,
        )

    def fractions(self, kind: str) -> list[float]:
        return sorted({row.fraction for row in self.rows if row.kind == kind})


def untrusted_node_experiment(
    kinds: Sequence[TopologyKind | str],
    fractions: Sequence[float],
    trials: int,
    pairs_per_trial: int,
    rng: np.random.Generator,
    params: Mapping[str, Mapping[str, float | int]] | None = None,
) -> DecayTable:
    """Measure viable-path decay as nodes become untrusted.

    Per trial: generate the family's topology from a fresh seed (random
    families thus resample their graph each trial), draw one random node
    permutation and ``pairs_per_trial`` endpoint pairs, then for every
    fraction f compromise the first floor(f * n) permutation entries.  A pair
    whose endpoint is compromised contributes zero; otherwise it contributes
    the number of minimum-hop paths avoiding the compromised set, within the
    pair's intact hop distance.  Pairs disconnected even intact contribute
    zero throughout and appear only in the aggregate rows.

    ``fractions`` must be strictly ascending within [0, 1].
    """
    if not kinds:
        raise ValueError("need at least one topology family")
    if not fractions:
        raise ValueError("need at least one fraction")
    fracs = [float(f) for f in fractions]
    if any(not 0.0 <= f <= 1.0 for f in fracs):
        raise ValueError("fractions must lie in [0, 1]")
    if any(b <= a for a, b in zip(fracs, fracs[1:])):
        raise ValueError("fractions must be strictly ascending")
    if trials <= 0 or pairs_per_trial <= 0:
        raise ValueError("trials and pairs per trial must be positive")

    params = params or {}
    rows: list[DecayRow] = []
    for kind in (TopologyKind(k) for k in kinds):
        # counts[fraction] -> list over samples; split by intact distance too
        aggregate: dict[float, list[int]] = {f: [] for f in fracs}
        by_distance: dict[tuple[float, int], list[int]] = {}
        for _ in range(trials):
            topo_seed = int(rng.integers(0, 2**63))
            topology = generate_topology(kind, topo_seed, params.get(kind.value))
            n = topology.n_nodes
            node_ids = sorted(topology.nodes)
            order = rng.permutation(n)
            pair_index = rng.integers(0, n, size=(pairs_per_trial, 2))
            for raw_u, raw_v in pair_index:
                u = node_ids[int(raw_u)]
                v = node_ids[int(raw_v)]
                if u == v:
                    v = node_ids[(int(raw_v) + 1) % n]
                intact_distance = hop_distance(topology, u, v)
                for f in fracs:
                    prefix = order[: math.floor(f * n)]
                    compromised = {node_ids[int(i)] for i in prefix}
                    if u in compromised or v in compromised:
                        count = 0
                    elif intact_distance < 0:
                        count = 0
                    else:
                        count = count_viable_paths(
                            topology, u, v, compromised, hop_bound=intact_distance
                        )
                    aggregate[f].append(count)
                    if intact_distance >= 0:
                        by_distance.setdefault((f, intact_distance), []).append(count)
        for f in fracs:
            samples = aggregate[f]
            rows.append(
                DecayRow(
                    kind=kind.value,
                    fraction=f,
                    distance=AGGREGATE_DISTANCE,
                    mean_count=float(np.mean(samples)),
                    std_count=float(np.std(samples)),
                    samples=len(samples),
                )
            )
        for (f, distance) in sorted(by_distance):
            samples = by_distance[(f, distance)]
            rows.append(
                DecayRow(
                    kind=kind.value,
                    fraction=f,
                    distance=distance,
                    mean_count=float(np.mean(samples)),
                    std_count=float(np.std(samples)),
                    samples=len(samples),
                )
            )
    return DecayTable(rows=tuple(rows))


# ---------------------------------------------------------------------------
# Route diversion by false advertisement
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiversionPair:
    """Honest and diverted routes for one endpoint pair."""

    source: int
    target: int
    honest_path: tuple[int, ...]
    diverted_path: tuple[int, ...]
    honest_via_hijacker: bool
    diverted_via_hijacker: bool

    @property
    def stretch_ratio(self) -> float:
        """Diverted hop count over honest hop count; 1.0 means no detour."""
        return (len(self.diverted_path) - 1) / (len(self.honest_path) - 1)


@dataclass(frozen=True, eq=False)
class DiversionResult:
    """How much traffic falsified zero-cost advertisements attract.

    ``baseline_fraction`` is how often routes pass through a hijacked node
    when everyone advertises honestly; ``diverted_fraction`` when the
    hijacked nodes advertise zero cost.  The gap is the attack's yield,
    bought at ``mean_hop_stretch`` (a hop-count ratio vs the honest routes,
    1.0 meaning no inflation) averaged over all routed pairs.
    """

    hijackers: frozenset[int]
    pairs: tuple[DiversionPair, ...]
    baseline_fraction: float
    diverted_fraction: float
    mean_hop_stretch: float


def diversion_experiment(
    topology: Topology,
    hijackers: int | Iterable[int],
    n_pairs: int,
    rng: np.random.Generator,
    response_time_scale: float = 100.0,
) -> DiversionResult:
    """Route random pairs with honest and falsified weight advertisements.

    ``hijackers`` may be a single node id or any iterable of them, including
    none at all (the trivial control: both routings coincide).  Hijacked
    nodes are excluded from the endpoint draw, since an endpoint sees its
    own traffic anyway.  Diversion only has teeth when other nodes carry
    nonzero quality figures; generate the topology with quality ranges or
    the two routings coincide.
    """
    hijacked = frozenset([hijackers] if isinstance(hijackers, int) else hijackers)
    missing = hijacked - set(topology.nodes)
    if missing:
        raise ValueError(f"hijackers {sorted(missing)} are not nodes of the topology")
    if n_pairs <= 0:
        raise ValueError("need at least one pair")
    policy = RoutingPolicy.trust_weighted(response_time_scale)
    candidates = [node for node in sorted(topology.nodes) if node not in hijacked]
    if len(candidates) < 2:
        raise ValueError("topology too small for endpoint pairs")
    lie = {node: 0.0 for node in hijacked}
    pairs: list[DiversionPair] = []
    for _ in range(n_pairs):
        i, j = rng.choice(len(candidates), size=2, replace=False)
        u, v = candidates[int(i)], candidates[int(j)]
        honest = route(topology, u, v, policy)
        diverted = route(topology, u, v, policy, advertised_weights=lie)
        if honest is None or diverted is None:
            continue
        pairs.append(
            DiversionPair(
                source=u,
                target=v,
                honest_path=tuple(honest),
                diverted_path=tuple(diverted),
                honest_via_hijacker=not hijacked.isdisjoint(honest[1:-1]),
                diverted_via_hijacker=not hijacked.isdisjoint(diverted[1:-1]),
            )
        )
    if not pairs:
        raise ValueError("no routable pairs were sampled")
    n = len(pairs)
    baseline = sum(p.honest_via_hijacker for p in pairs) / n
    diverted_frac = sum(p.diverted_via_hijacker for p in pairs) / n
    mean_stretch = float(np.mean([p.stretch_ratio for p in pairs]))
    return DiversionResult(
        hijackers=hijacked,
        pairs=tuple(pairs),
        baseline_fraction=baseline,
        diverted_fraction=diverted_frac,
        mean_hop_stretch=mean_stretch,
    )
