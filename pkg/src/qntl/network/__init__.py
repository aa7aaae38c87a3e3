"""Network layer: topologies, instantaneous link state, routing, and the
node-compromise, route-diversion, and connection-flood experiments."""
from .dos import ConnectionRequest, DosResult, Mitigation, MitigationKind, dos_simulate
from .experiments import (
    DecayRow,
    DecayTable,
    DiversionPair,
    DiversionResult,
    diversion_experiment,
    untrusted_node_experiment,
)
from .instant import InstantTopology, establish_e2e, sample_instant_topology
from .paths import (
    RoutePolicyKind,
    RoutingPolicy,
    count_viable_paths,
    hop_distance,
    route,
)
from .topology import (
    DEFAULT_PARAMS,
    NodeInfo,
    Topology,
    TopologyKind,
    export_topology,
    generate_topology,
    import_topology,
    mark_untrusted,
)

__all__ = [
    "ConnectionRequest",
    "DosResult",
    "Mitigation",
    "MitigationKind",
    "dos_simulate",
    "DecayRow",
    "DecayTable",
    "DiversionPair",
    "DiversionResult",
    "diversion_experiment",
    "untrusted_node_experiment",
    "InstantTopology",
    "establish_e2e",
    "sample_instant_topology",
    "RoutePolicyKind",
    "RoutingPolicy",
    "count_viable_paths",
    "hop_distance",
    "route",
    "DEFAULT_PARAMS",
    "NodeInfo",
    "Topology",
    "TopologyKind",
    "export_topology",
    "generate_topology",
    "import_topology",
    "mark_untrusted",
]
