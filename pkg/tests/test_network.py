"""Tests for topology generation, path counting, routing, instantaneous
link state, and the network experiments."""
import math

import numpy as np
import pytest

from qntl.network import (
    DecayRow,
    InstantTopology,
    NodeInfo,
    RoutingPolicy,
    Topology,
    TopologyKind,
    count_viable_paths,
    diversion_experiment,
    establish_e2e,
    export_topology,
    generate_topology,
    hop_distance,
    import_topology,
    mark_untrusted,
    route,
    sample_instant_topology,
    untrusted_node_experiment,
)
from qntl.stats import stream


def tiny_path_topology():
    """0 - 1 - 2 chain used by the cut-vertex cases."""
    nodes = {i: NodeInfo(node_id=i) for i in range(3)}
    return Topology(
        kind=TopologyKind.GRID, seed=0, nodes=nodes, edges=((0, 1), (1, 2))
    )


# ---------------------------------------------------------------- generation

def test_grid_dimensions():
    topo = generate_topology("grid", 0)
    assert topo.n_nodes == 100
    # a rows x cols lattice has rows*(cols-1) + (rows-1)*cols edges
    assert topo.n_edges == 10 * 9 + 9 * 10


def test_tree_dimensions():
    topo = generate_topology("tree", 0)
    # height-4 branching-3 balanced tree: (3^5 - 1) / 2 nodes
    assert topo.n_nodes == (3**5 - 1) // 2
    assert topo.n_edges == topo.n_nodes - 1


def test_erdos_renyi_edge_count():
    n_pairs = math.comb(100, 2)
    mean = n_pairs * 0.2
    sigma = math.sqrt(n_pairs * 0.2 * 0.8)
    for seed in range(5):
        topo = generate_topology("erdos-renyi", seed)
        assert abs(topo.n_edges - mean) < 3 * sigma


def test_barabasi_albert_edge_count():
    # seed clique of k+1 nodes, then k fresh links per added node
    topo = generate_topology("barabasi-albert", 3)
    k, n = 3, 100
    assert topo.n_nodes == n
    assert topo.n_edges == math.comb(k + 1, 2) + k * (n - k - 1)


def test_generation_is_deterministic():
    for kind in TopologyKind:
        a = generate_topology(kind, 1234)
        b = generate_topology(kind, 1234)
        assert a.edges == b.edges
    a = generate_topology("waxman", 1)
    b = generate_topology("waxman", 2)
    assert a.edges != b.edges


def test_generation_param_overrides_and_errors():
    topo = generate_topology("grid", 0, {"rows": 3, "cols": 4})
    assert topo.n_nodes == 12
    with pytest.raises(ValueError):
        generate_topology("grid", 0, {"height": 2})
    with pytest.raises(ValueError):
        generate_topology("barabasi-albert", 0, {"n": 4})  # below k + 2


def test_generation_quality_ranges():
    topo = generate_topology(
        "grid", 7, error_rate_range=(0.01, 0.05), response_time_range=(10.0, 50.0)
    )
    rates = [info.error_rate for info in topo.nodes.values()]
    times = [info.response_time_ms for info in topo.nodes.values()]
    assert all(0.01 <= r <= 0.05 for r in rates)
    assert all(10.0 <= t <= 50.0 for t in times)
    assert len(set(rates)) > 1
    with pytest.raises(ValueError):
        generate_topology("grid", 7, error_rate_range=(0.5, 0.1))


def test_topology_validation():
    nodes = {i: NodeInfo(node_id=i) for i in range(2)}
    with pytest.raises(ValueError):
        Topology(kind=TopologyKind.GRID, seed=0, nodes=nodes, edges=((0, 0),))
    with pytest.raises(ValueError):
        Topology(kind=TopologyKind.GRID, seed=0, nodes=nodes, edges=((0, 3),))
    with pytest.raises(ValueError):
        Topology(kind=TopologyKind.GRID, seed=0, nodes=nodes, edges=((0, 1), (1, 0)))


def test_mark_untrusted():
    topo = generate_topology("grid", 0)
    flagged = mark_untrusted(topo, [3, 17])
    assert not flagged.nodes[3].trusted
    assert not flagged.nodes[17].trusted
    assert flagged.nodes[4].trusted
    assert topo.nodes[3].trusted  # original untouched
    with pytest.raises(ValueError):
        mark_untrusted(topo, [999])


def test_export_import_round_trip():
    topo = generate_topology(
        "waxman", 11, error_rate_range=(0.0, 0.1), response_time_range=(5.0, 9.0)
    )
    topo = mark_untrusted(topo, [2, 5])
    text = export_topology(topo)
    again = import_topology(text)
    assert again.edges == topo.edges
    assert again.nodes == topo.nodes
    assert again.kind == topo.kind and again.seed == topo.seed
    assert export_topology(again) == text


def test_export_layout_is_edges_then_nodes():
    lines = export_topology(tiny_path_topology()).splitlines()
    assert lines[0].startswith("nodes 3 kind ")
    kinds = [line.split()[0] for line in lines[1:]]
    assert kinds == ["edge", "edge", "node", "node", "node"]


def test_import_rejects_malformed_documents():
    with pytest.raises(ValueError):
        import_topology("")
    with pytest.raises(ValueError):
        import_topology("nodes 1 sort grid seed 0\n")
    with pytest.raises(ValueError):
        import_topology("nodes 2 kind grid seed 0\nwire 0 1\n")
    with pytest.raises(ValueError):
        import_topology(
            "nodes 2 kind grid seed 0\nnode 0 trusted 1 err 0.0 rt 0.0\n"
        )  # declared 2, found 1


# ---------------------------------------------------------------- path counts

def test_grid_corner_path_count():
    topo = generate_topology("grid", 0)
    # 18 moves, 9 of them in each direction
    assert count_viable_paths(topo, 0, 99) == math.comb(18, 9)


def test_adjacent_endpoints_survive_removals():
    topo = generate_topology("grid", 0)
    rng = stream(5, "adjacent")
    u, v = 44, 45
    assert topo.has_edge(u, v)
    others = [n for n in topo.nodes if n not in (u, v)]
    for _ in range(20):
        removed = set(rng.choice(others, size=50, replace=False).tolist())
        assert count_viable_paths(topo, u, v, removed) >= 1


def test_cut_disconnects_count():
    topo = generate_topology("grid", 0)
    # column 5 of the 10x10 grid separates 0 from 99
    cut = {row * 10 + 5 for row in range(10)}
    assert count_viable_paths(topo, 0, 99, cut) == 0


def test_hop_bound_excludes_detours():
    topo = tiny_path_topology()
    assert count_viable_paths(topo, 0, 2) == 1
    assert count_viable_paths(topo, 0, 2, hop_bound=1) == 0
    assert count_viable_paths(topo, 0, 2, hop_bound=2) == 1


def test_count_corner_cases():
    topo = tiny_path_topology()
    assert count_viable_paths(topo, 1, 1) == 1
    assert count_viable_paths(topo, 0, 2, {1}) == 0
    with pytest.raises(ValueError):
        count_viable_paths(topo, 0, 2, {0})
    with pytest.raises(ValueError):
        count_viable_paths(topo, 0, 9)


def test_count_is_monotone_in_compromise():
    # Monotone under a fixed hop budget: growing the compromised set can
    # only strike length-d paths, never mint new ones.  Unbounded counts may
    # rise when blocking stretches the minimum distance itself.
    topo = generate_topology("erdos-renyi", 3, {"n": 40, "p": 0.15})
    rng = stream(6, "nested")
    node_ids = sorted(topo.nodes)
    for _ in range(100):
        u, v = rng.choice(len(node_ids), size=2, replace=False)
        u, v = node_ids[int(u)], node_ids[int(v)]
        bound = hop_distance(topo, u, v)
        if bound < 0:
            continue
        order = [n for n in rng.permutation(node_ids) if n not in (u, v)]
        small = set(order[:5])
        large = set(order[:15])
        constrained = count_viable_paths(topo, u, v, large, hop_bound=bound)
        relaxed = count_viable_paths(topo, u, v, small, hop_bound=bound)
        assert constrained <= relaxed
        assert relaxed <= count_viable_paths(topo, u, v, hop_bound=bound)


def test_hop_distance():
    topo = tiny_path_topology()
    assert hop_distance(topo, 0, 1) == 1
    assert hop_distance(topo, 0, 2) == 2
    lonely = Topology(
        kind=TopologyKind.GRID,
        seed=0,
        nodes={i: NodeInfo(node_id=i) for i in range(3)},
        edges=((0, 1),),
    )
    assert hop_distance(lonely, 0, 2) == -1


# ---------------------------------------------------------------- routing

def test_uniform_weights_match_shortest_hop():
    topo = generate_topology("grid", 0)  # all quality figures zero
    rng = stream(8, "route-equal")
    for _ in range(25):
        u, v = rng.integers(0, 100, size=2)
        if u == v:
            continue
        short = route(topo, int(u), int(v), RoutingPolicy.shortest_hop())
        trust = route(topo, int(u), int(v), RoutingPolicy.trust_weighted())
        assert short == trust


def test_route_avoids_bad_intermediate():
    # square 0-1-3, 0-2-3 with node 1 advertising certain failure
    nodes = {
        0: NodeInfo(node_id=0),
        1: NodeInfo(node_id=1, error_rate=1.0),
        2: NodeInfo(node_id=2),
        3: NodeInfo(node_id=3),
    }
    topo = Topology(
        kind=TopologyKind.GRID, seed=0, nodes=nodes, edges=((0, 1), (0, 2), (1, 3), (2, 3))
    )
    path = route(topo, 0, 3, RoutingPolicy.trust_weighted())
    assert path == [0, 2, 3]
    # shortest-hop ignores the figure and takes the lexicographic tie-break
    assert route(topo, 0, 3, RoutingPolicy.shortest_hop()) == [0, 1, 3]


def test_route_none_when_disconnected():
    lonely = Topology(
        kind=TopologyKind.GRID,
        seed=0,
        nodes={i: NodeInfo(node_id=i) for i in range(3)},
        edges=((0, 1),),
    )
    for policy in (
        RoutingPolicy.shortest_hop(),
        RoutingPolicy.trust_weighted(),
        RoutingPolicy.prune_compromised(),
    ):
        assert route(lonely, 0, 2, policy) is None


def test_route_prunes_untrusted_nodes():
    topo = mark_untrusted(tiny_path_topology(), [1])
    assert route(topo, 0, 2, RoutingPolicy.shortest_hop()) == [0, 1, 2]
    assert route(topo, 0, 2, RoutingPolicy.prune_compromised()) is None
    untrusted_target = mark_untrusted(tiny_path_topology(), [2])
    assert route(untrusted_target, 0, 2, RoutingPolicy.prune_compromised()) is None


def test_route_trivia():
    topo = tiny_path_topology()
    assert route(topo, 1, 1, RoutingPolicy.shortest_hop()) == [1]
    with pytest.raises(ValueError):
        route(topo, 0, 9, RoutingPolicy.shortest_hop())
    with pytest.raises(ValueError):
        RoutingPolicy.trust_weighted(0.0)


def test_route_is_deterministic():
    topo = generate_topology("erdos-renyi", 4)
    a = route(topo, 0, 99, RoutingPolicy.shortest_hop())
    b = route(topo, 0, 99, RoutingPolicy.shortest_hop())
    assert a == b


def test_advertised_weights_override_only_listed_nodes():
    nodes = {
        0: NodeInfo(node_id=0),
        1: NodeInfo(node_id=1, error_rate=0.9),
        2: NodeInfo(node_id=2, error_rate=0.1),
        3: NodeInfo(node_id=3),
    }
    topo = Topology(
        kind=TopologyKind.GRID, seed=0, nodes=nodes, edges=((0, 1), (0, 2), (1, 3), (2, 3))
    )
    honest = route(topo, 0, 3, RoutingPolicy.trust_weighted())
    assert honest == [0, 2, 3]
    lied = route(topo, 0, 3, RoutingPolicy.trust_weighted(), advertised_weights={1: 0.0})
    assert lied == [0, 1, 3]


# ---------------------------------------------------------------- instants

def test_instant_extremes():
    topo = generate_topology("grid", 0)
    rng = stream(0, "instant")
    assert sample_instant_topology(topo, 1.0, rng).n_live == topo.n_edges
    assert sample_instant_topology(topo, 0.0, rng).n_live == 0


def test_instant_half_probability():
    topo = generate_topology("grid", 0)
    for seed in range(5):
        instant = sample_instant_topology(topo, 0.5, stream(seed, "instant-half"))
        assert abs(instant.n_live - 90) < 20  # 3 sigma of Binomial(180, 1/2)


def test_instant_validation():
    topo = tiny_path_topology()
    with pytest.raises(ValueError):
        sample_instant_topology(topo, 1.5, stream(0, "x"))
    with pytest.raises(ValueError):
        InstantTopology(base=topo, live_links=frozenset({(0, 2)}))


def test_e2e_direct_link_always_succeeds():
    topo = tiny_path_topology()
    instant = sample_instant_topology(topo, 1.0, stream(0, "e2e"))
    rng = stream(1, "e2e-direct")
    assert all(establish_e2e(instant, [0, 1], 0.0, rng) for _ in range(50))


def test_e2e_swap_chain_rates():
    topo = generate_topology("grid", 0)
    instant = sample_instant_topology(topo, 1.0, stream(0, "e2e-chain"))
    for k in (1, 2, 4):
        path = list(range(k + 2))  # first grid row runs 0..9 left to right
        rng = stream(42, f"e2e-k{k}")
        wins = sum(establish_e2e(instant, path, 0.9, rng) for _ in range(10**4))
        expected = 0.9**k
        sigma = math.sqrt(expected * (1.0 - expected) / 10**4)
        assert abs(wins / 10**4 - expected) < 3 * sigma


def test_e2e_validation():
    topo = tiny_path_topology()
    rng = stream(0, "e2e-err")
    dead = sample_instant_topology(topo, 0.0, rng)
    with pytest.raises(ValueError):
        establish_e2e(dead, [0, 1], 0.9, rng)
    live = sample_instant_topology(topo, 1.0, rng)
    with pytest.raises(ValueError):
        establish_e2e(live, [0], 0.9, rng)
    with pytest.raises(ValueError):
        establish_e2e(live, [0, 1, 0], 0.9, rng)
    with pytest.raises(ValueError):
        establish_e2e(live, [0, 1], 1.1, rng)


def test_routing_works_on_instant_topologies():
    topo = tiny_path_topology()
    partial = InstantTopology(base=topo, live_links=frozenset({(0, 1)}))
    assert route(partial, 0, 2, RoutingPolicy.shortest_hop()) is None
    assert route(partial, 0, 1, RoutingPolicy.shortest_hop()) == [0, 1]
    assert count_viable_paths(partial, 0, 2) == 0


# ---------------------------------------------------------------- decay

def test_decay_experiment_shape_and_monotonicity():
    fractions = [0.0, 0.2, 0.4, 0.6]
    table = untrusted_node_experiment(
        ["grid", "tree"], fractions, trials=3, pairs_per_trial=8, rng=stream(42, "decay")
    )
    for kind in ("grid", "tree"):
        assert table.fractions(kind) == fractions
        means = [table.aggregate(kind, f).mean_count for f in fractions]
        assert means[0] > 0
        # nested compromise sets force non-increasing means, every seed
        assert all(a >= b for a, b in zip(means, means[1:]))
        assert table.aggregate(kind, 0.0).samples == 3 * 8
    with pytest.raises(KeyError):
        table.aggregate("grid", 0.31)


def test_decay_distance_rows_partition_the_aggregate():
    table = untrusted_node_experiment(
        ["grid"], [0.0, 0.3], trials=2, pairs_per_trial=10, rng=stream(7, "decay-dist")
    )
    rows = table.by_distance("grid", 0.3)
    assert rows, "expected distance-binned rows"
    assert all(isinstance(r, DecayRow) and r.distance >= 1 for r in rows)
    assert [r.distance for r in rows] == sorted(r.distance for r in rows)
    # grid stays connected, so the distance bins cover every sampled pair
    assert sum(r.samples for r in rows) == table.aggregate("grid", 0.3).samples


def test_decay_validation():
    rng = stream(0, "decay-err")
    with pytest.raises(ValueError):
        untrusted_node_experiment([], [0.1], 1, 1, rng)
    with pytest.raises(ValueError):
        untrusted_node_experiment(["grid"], [], 1, 1, rng)
    with pytest.raises(ValueError):
        untrusted_node_experiment(["grid"], [0.4, 0.2], 1, 1, rng)
    with pytest.raises(ValueError):
        untrusted_node_experiment(["grid"], [0.1, 1.2], 1, 1, rng)
    with pytest.raises(ValueError):
        untrusted_node_experiment(["grid"], [0.1], 0, 1, rng)


# ---------------------------------------------------------------- diversion

def test_diversion_without_hijackers_is_identity():
    topo = generate_topology(
        "grid", 3, error_rate_range=(0.0, 0.05), response_time_range=(10.0, 50.0)
    )
    result = diversion_experiment(topo, [], 50, stream(3, "div-none"))
    assert result.hijackers == frozenset()
    assert result.baseline_fraction == 0.0
    assert result.diverted_fraction == 0.0
    assert result.mean_hop_stretch == 1.0


def test_diversion_cut_vertex_intercepts_everything():
    result = diversion_experiment(tiny_path_topology(), 1, 10, stream(1, "div-cut"))
    assert result.baseline_fraction == 1.0
    assert result.diverted_fraction == 1.0


def test_diversion_central_node_attracts_traffic():
    topo = generate_topology(
        "grid", 42, error_rate_range=(0.0, 0.05), response_time_range=(10.0, 50.0)
    )
    result = diversion_experiment(topo, 55, 100, stream(42, "div-central"))
    assert result.diverted_fraction > result.baseline_fraction
    assert len(result.pairs) == 100
    for pair in result.pairs:
        assert 55 not in (pair.source, pair.target)
        assert pair.stretch_ratio == (len(pair.diverted_path) - 1) / (
            len(pair.honest_path) - 1
        )


def test_diversion_validation():
    topo = tiny_path_topology()
    with pytest.raises(ValueError):
        diversion_experiment(topo, 99, 5, stream(0, "div-err"))
    with pytest.raises(ValueError):
        diversion_experiment(topo, 1, 0, stream(0, "div-err"))
    with pytest.raises(ValueError):
        diversion_experiment(topo, [0, 1], 5, stream(0, "div-err"))  # one endpoint left
