"""Experiment registry: one named entry per runnable scenario.

Each entry binds a parameter schema to a runner function.  Runners take the
resolved parameter mapping plus the seed and return ``(columns, rows,
summary)``; all randomness flows through a stream labeled with the
experiment name, so a fixed (seed, params) pair reproduces rows byte for
byte.  Rows and summaries hold plain Python scalars only, never numpy
types, because both the CSV and JSON writers rely on builtin formatting.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from .. import attacks, network, photonics, qkd
from ..stats import stream
from .config import ConfigError, ParamSpec, parse_int_list, parse_range, parse_str_list

__all__ = ["ExperimentDef", "EXPERIMENTS", "get_experiment"]

Columns = tuple[str, ...]
Rows = list[tuple]
Summary = dict[str, Any]
RunnerFn = Callable[[Mapping[str, Any], int], tuple[Columns, Rows, Summary]]


@dataclass(frozen=True)
class ExperimentDef:
    name: str
    help: str
    specs: tuple[ParamSpec, ...]
    run: RunnerFn


# ---------------------------------------------------------------------------
# Value coercion: flags arrive as strings, config files as JSON values
# ---------------------------------------------------------------------------

def _as_int(raw: Any) -> int:
    if isinstance(raw, bool):
        raise ConfigError(f"expected an integer, got {raw!r}")
    if isinstance(raw, int):
        return raw
    if isinstance(raw, float):
        if raw != int(raw):
            raise ConfigError(f"expected an integer, got {raw!r}")
        return int(raw)
    try:
        return int(str(raw).strip())
    except ValueError:
        raise ConfigError(f"expected an integer, got {raw!r}") from None


def _as_float(raw: Any) -> float:
    if isinstance(raw, bool):
        raise ConfigError(f"expected a number, got {raw!r}")
    if isinstance(raw, (int, float)):
        return float(raw)
    try:
        return float(str(raw).strip())
    except ValueError:
        raise ConfigError(f"expected a number, got {raw!r}") from None


def _as_bool(raw: Any) -> bool:
    if isinstance(raw, bool):
        return raw
    text = str(raw).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {raw!r}")


def _as_float_list(raw: Any) -> list[float]:
    if isinstance(raw, (list, tuple)):
        return [_as_float(v) for v in raw]
    return parse_range(str(raw))


def _as_int_list(raw: Any) -> list[int]:
    if isinstance(raw, (list, tuple)):
        return [_as_int(v) for v in raw]
    return parse_int_list(str(raw))


def _as_str_list(raw: Any) -> list[str]:
    if isinstance(raw, (list, tuple)):
        return [str(v) for v in raw]
    return parse_str_list(str(raw))


def _py(value: Any) -> Any:
    """Collapse numpy scalars to builtins; row cells must stay plain."""
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def _row(*cells: Any) -> tuple:
    return tuple(_py(c) for c in cells)


def _key_digest(bits: np.ndarray) -> str:
    return hashlib.sha256(np.asarray(bits, dtype=np.uint8).tobytes()).hexdigest()


# ---------------------------------------------------------------------------
# Attack-token parsing shared by the pns and decoy scenarios
# ---------------------------------------------------------------------------

def _splitter_strategy(token: str) -> attacks.PnsStrategy:
    if token == "no-eve":
        return attacks.PnsStrategy.no_eve()
    if token == "always-minus-one":
        return attacks.PnsStrategy.always_minus_one()
    if token == "block-singles":
        return attacks.PnsStrategy.block_singles()
    if token.startswith("random-"):
        try:
            q = float(token[len("random-"):])
        except ValueError:
            raise ConfigError(f"bad intercept probability in {token!r}") from None
        if not 0.0 <= q <= 1.0:
            raise ConfigError(f"intercept probability must lie in [0, 1], got {q}")
        return attacks.PnsStrategy.random_intercept(q)
    raise ConfigError(
        f"unknown splitting strategy {token!r}; expected no-eve, random-<p>, "
        "always-minus-one, or block-singles"
    )


def _parse_strategy_tokens(raw: Any) -> list[str]:
    tokens = _as_str_list(raw)
    labels = [_splitter_strategy(t).label() for t in tokens]
    if len(set(labels)) != len(labels):
        raise ConfigError("duplicate splitting strategies in list")
    return tokens


def _trojan_policy(token: str) -> attacks.TrojanPolicy:
    if token == "no-shift":
        return attacks.TrojanPolicy.no_shift()
    if token == "random-shift":
        return attacks.TrojanPolicy.random_shift()
    if token == "fixed-half-pi":
        return attacks.TrojanPolicy.fixed_shift(math.pi / 2.0)
    if token.startswith("fixed-"):
        try:
            theta = float(token[len("fixed-"):])
        except ValueError:
            raise ConfigError(f"bad phase in {token!r}") from None
        if not 0.0 <= theta < 2.0 * math.pi:
            raise ConfigError(f"phase must lie in [0, 2*pi), got {theta}")
        return attacks.TrojanPolicy.fixed_shift(theta)
    raise ConfigError(
        f"unknown probing policy {token!r}; expected no-shift, fixed-<phase>, "
        "fixed-half-pi, or random-shift"
    )


def _parse_policy_tokens(raw: Any) -> list[str]:
    tokens = _as_str_list(raw)
    for t in tokens:
        _trojan_policy(t)
    if len(set(tokens)) != len(tokens):
        raise ConfigError("duplicate probing policies in list")
    return tokens


def _optional_splitter(raw: Any) -> str:
    token = str(raw).strip()
    if token != "none":
        _splitter_strategy(token)
    return token


def _choice(name: str, options: Sequence[str]) -> Callable[[Any], str]:
    def parse(raw: Any) -> str:
        token = str(raw).strip()
        if token not in options:
            listed = ", ".join(options)
            raise ConfigError(f"unknown {name} {token!r}; expected one of {listed}")
        return token

    return parse


# ---------------------------------------------------------------------------
# Photon-number splitting
# ---------------------------------------------------------------------------

_PNS_SPECS = (
    ParamSpec("mu", _as_float, 5.0, "mean photons per weak coherent pulse"),
    ParamSpec("pulses", _as_int, 100_000, "pulses per strategy"),
    ParamSpec(
        "strategies",
        _parse_strategy_tokens,
        ["no-eve", "random-0.5", "always-minus-one"],
        "comma-separated splitting strategies to compare",
    ),
    ParamSpec("max_bin", _as_int, 20, "last histogram bin (aggregates the tail)"),
)


def _run_pns(params: Mapping[str, Any], seed: int) -> tuple[Columns, Rows, Summary]:
    strategies = [_splitter_strategy(t) for t in params["strategies"]]
    rng = stream(seed, "pns")
    result = attacks.pns_experiment(
        params["pulses"], params["mu"], strategies, rng, max_bin=params["max_bin"]
    )
    columns = ("series", "record", "bin", "value")
    rows: Rows = []
    for b, count in zip(result.baseline.bins, result.baseline.counts):
        rows.append(_row("baseline", "count", b, count))
    for strategy in strategies:
        label = strategy.label()
        hist = result.histograms[label]
        for b, count in zip(hist.bins, hist.counts):
            rows.append(_row(label, "count", b, count))
        for b, z in zip(hist.bins, result.zscores[label].z):
            rows.append(_row(label, "zscore", b, z))
    summary: Summary = {
        "mean_photons": params["mu"],
        "n_pulses": params["pulses"],
        "max_abs_z": {s.label(): _py(result.max_abs_z(s.label())) for s in strategies},
    }
    return columns, rows, summary


# ---------------------------------------------------------------------------
# Trojan-horse probing gain
# ---------------------------------------------------------------------------

_TROJAN_SPECS = (
    ParamSpec("photons", _as_int, 100_000, "probe photons per policy"),
    ParamSpec(
        "policies",
        _parse_policy_tokens,
        ["no-shift", "fixed-half-pi", "random-shift"],
        "comma-separated phase-shift policies to compare",
    ),
)


def _run_trojan(params: Mapping[str, Any], seed: int) -> tuple[Columns, Rows, Summary]:
    n = params["photons"]
    stride = max(n // 200, 1)
    columns = ("policy", "photon_index", "cumulative_gain")
    rows: Rows = []
    gain_per_photon: dict[str, float] = {}
    rng = stream(seed, "trojan")
    for token in params["policies"]:
        policy = _trojan_policy(token)
        ledger = attacks.trojan_gain_experiment(n, policy, rng)
        series = ledger.cumulative_series()
        label = policy.label()
        for i in range(stride - 1, n, stride):
            rows.append(_row(label, i + 1, series[i]))
        if n % stride != 0:
            rows.append(_row(label, n, series[-1]))
        gain_per_photon[label] = float(series[-1]) / n
    summary: Summary = {"n_photons": n, "gain_per_photon": gain_per_photon}
    return columns, rows, summary


# ---------------------------------------------------------------------------
# Prepare-and-measure key exchange
# ---------------------------------------------------------------------------

_BB84_SPECS = (
    ParamSpec("rounds", _as_int, 2000, "qubits sent"),
    ParamSpec(
        "attack",
        _choice("attack", ("none", "intercept-resend")),
        "none",
        "in-flight attack on the quantum channel",
    ),
    ParamSpec(
        "source",
        _choice("source", ("single-photon", "weak-coherent")),
        "single-photon",
        "photon source model",
    ),
    ParamSpec("mu", _as_float, 0.5, "mean photons per pulse (weak-coherent only)"),
    ParamSpec("transmittance", _as_float, 1.0, "channel transmittance"),
    ParamSpec("efficiency", _as_float, 1.0, "detector efficiency"),
    ParamSpec("dark", _as_float, 0.0, "detector dark-count probability"),
    ParamSpec("disclosed_fraction", _as_float, 0.1, "sifted fraction disclosed for error estimation"),
    ParamSpec("abort_threshold", _as_float, 0.11, "error rate above which the session aborts"),
)


def _session_row(session: qkd.QkdSession) -> tuple:
    return _row(
        session.n_rounds,
        session.sifted_count,
        session.disclosed_count,
        session.qber_estimate,
        session.leaked_bits,
        session.final_key_bits,
        session.aborted,
        session.eavesdrop_detected,
        _key_digest(session.final_key),
    )


def _session_summary(session: qkd.QkdSession) -> Summary:
    return {
        "aborted": session.aborted,
        "abort_reason": session.abort_reason,
        "qber": _py(session.qber_estimate),
        "final_bits": session.final_key_bits,
        "eavesdrop_detected": session.eavesdrop_detected,
    }


def _run_bb84(params: Mapping[str, Any], seed: int) -> tuple[Columns, Rows, Summary]:
    rng = stream(seed, "bb84")
    source = None
    if params["source"] == "weak-coherent":
        source = photonics.PhotonSource.weak_coherent(params["mu"])
    channel = None
    if params["transmittance"] != 1.0:
        channel = photonics.LossChannel(params["transmittance"])
    detector = photonics.Detector(
        efficiency=params["efficiency"], dark_count_prob=params["dark"]
    )
    eavesdropper = None
    if params["attack"] == "intercept-resend":
        eavesdropper = attacks.intercept_resend("random")
    session = qkd.run_bb84(
        params["rounds"],
        rng,
        source=source,
        channel=channel,
        detector=detector,
        eavesdropper=eavesdropper,
        disclosed_fraction=params["disclosed_fraction"],
        abort_threshold=params["abort_threshold"],
    )
    columns = (
        "rounds", "sifted", "disclosed", "qber", "leaked", "final_bits",
        "aborted", "eavesdrop_detected", "key_sha256",
    )
    return columns, [_session_row(session)], _session_summary(session)


# ---------------------------------------------------------------------------
# Entanglement-based key exchange
# ---------------------------------------------------------------------------

_E91_SPECS = (
    ParamSpec("rounds", _as_int, 2000, "entangled pairs consumed"),
    ParamSpec(
        "attack",
        _choice("attack", ("none", "probe")),
        "none",
        "pair-source attack (probe entangles an ancilla with every pair)",
    ),
    ParamSpec("chsh_fraction", _as_float, 0.25, "fraction of rounds spent on the correlation test"),
    ParamSpec("detection_margin", _as_float, 0.1, "required margin above the classical bound"),
    ParamSpec("disclosed_fraction", _as_float, 0.1, "sifted fraction disclosed for error estimation"),
    ParamSpec("abort_threshold", _as_float, 0.11, "error rate above which the session aborts"),
)


def _run_e91(params: Mapping[str, Any], seed: int) -> tuple[Columns, Rows, Summary]:
    rng = stream(seed, "e91")
    hook = attacks.probe_hook() if params["attack"] == "probe" else None
    session = qkd.run_e91(
        params["rounds"],
        rng,
        pair_hook=hook,
        chsh_fraction=params["chsh_fraction"],
        detection_margin=params["detection_margin"],
        disclosed_fraction=params["disclosed_fraction"],
        abort_threshold=params["abort_threshold"],
    )
    columns = (
        "rounds", "test_rounds", "chsh", "sifted", "disclosed", "qber",
        "leaked", "final_bits", "aborted", "eavesdrop_detected", "key_sha256",
    )
    chsh = session.chsh_estimate if session.chsh_estimate is not None else float("nan")
    row = _row(
        session.n_rounds,
        session.chsh_rounds,
        chsh,
        session.sifted_count,
        session.disclosed_count,
        session.qber_estimate,
        session.leaked_bits,
        session.final_key_bits,
        session.aborted,
        session.eavesdrop_detected,
        _key_digest(session.final_key),
    )
    summary = _session_summary(session)
    summary["chsh"] = _py(chsh)
    return columns, [row], summary


# ---------------------------------------------------------------------------
# Trusted-relay key transport
# ---------------------------------------------------------------------------

_RELAY_SPECS = (
    ParamSpec("key_bits", _as_int, 128, "end-to-end key length"),
    ParamSpec("relays", _as_int, 4, "intermediate relay count"),
)


def _run_relay(params: Mapping[str, Any], seed: int) -> tuple[Columns, Rows, Summary]:
    rng = stream(seed, "relay")
    key = rng.integers(0, 2, size=params["key_bits"], dtype=np.int8)
    result = qkd.run_relay_chain(key, params["relays"], rng)
    columns = ("relay_index", "cleartext_matches_key", "wire_differs_from_key")
    rows: Rows = []
    for exposure in result.exposures:
        wire = result.wire_ciphertexts[exposure.relay_index - 1]
        rows.append(
            _row(
                exposure.relay_index,
                bool(np.array_equal(exposure.cleartext, key)),
                not np.array_equal(wire, key),
            )
        )
    summary: Summary = {
        "n_relays": result.n_relays,
        "n_hops": result.n_hops,
        "recovered_ok": result.recovered_ok,
        "exposures": len(result.exposures),
        "key_sha256": _key_digest(key),
    }
    return columns, rows, summary


# ---------------------------------------------------------------------------
# Decoy-intensity consistency check
# ---------------------------------------------------------------------------

_DECOY_SPECS = (
    ParamSpec("signal_mu", _as_float, 0.5, "signal intensity"),
    ParamSpec("decoy_mus", _as_float_list, [0.1], "decoy intensities"),
    ParamSpec("vacuum", _as_bool, True, "include a vacuum intensity class"),
    ParamSpec("pulses", _as_int, 100_000, "pulses per intensity class"),
    ParamSpec("transmittance", _as_float, 0.5, "channel transmittance"),
    ParamSpec("efficiency", _as_float, 0.9, "detector efficiency"),
    ParamSpec("dark", _as_float, 1e-5, "detector dark-count probability"),
    ParamSpec(
        "attack",
        _optional_splitter,
        "none",
        "splitting attack, or none (same tokens as the pns scenario)",
    ),
    ParamSpec("threshold", _as_float, 0.1, "relative gain deviation that raises the alarm"),
)


def _run_decoy(params: Mapping[str, Any], seed: int) -> tuple[Columns, Rows, Summary]:
    rng = stream(seed, "decoy")
    pulses = params["pulses"]
    intensities = [qkd.DecoyIntensity(photonics.SIGNAL, params["signal_mu"], pulses)]
    for i, mu in enumerate(params["decoy_mus"]):
        intensities.append(qkd.DecoyIntensity(photonics.decoy_label(i), mu, pulses))
    if params["vacuum"]:
        intensities.append(
            qkd.DecoyIntensity(photonics.decoy_label(len(params["decoy_mus"])), 0.0, pulses)
        )
    channel = photonics.LossChannel(params["transmittance"])
    detector = photonics.Detector(
        efficiency=params["efficiency"], dark_count_prob=params["dark"]
    )
    attacker = None
    if params["attack"] != "none":
        attacker = _splitter_strategy(params["attack"])
    tallies = qkd.simulate_decoy_transmissions(
        intensities, channel, detector, rng, attacker=attacker
    )
    analysis = qkd.decoy_state_analysis(
        tallies, channel, detector, deviation_threshold=params["threshold"]
    )
    columns = (
        "label", "mean_photons", "sent", "detected", "gain", "model_gain",
        "relative_deviation",
    )
    rows = [
        _row(a.label, a.mean_photons, a.sent, a.detected, a.gain, a.model_gain,
             a.relative_deviation)
        for a in analysis.assessments
    ]
    y1 = analysis.single_photon_yield_lower_bound
    summary: Summary = {
        "eavesdrop_detected": analysis.eavesdrop_detected,
        "max_relative_deviation": _py(analysis.max_relative_deviation),
        "vacuum_yield": _py(analysis.vacuum_yield),
        "single_photon_yield_lower_bound": _py(y1) if y1 is not None else None,
        "deviation_threshold": params["threshold"],
    }
    return columns, rows, summary


# ---------------------------------------------------------------------------
# Repetition-code error correction
# ---------------------------------------------------------------------------

_QEC_SPECS = (
    ParamSpec("flip_probs", _as_float_list, [0.05, 0.1, 0.2, 0.3], "physical flip probabilities"),
    ParamSpec("blocks", _as_int, 20_000, "code blocks per (mode, probability) cell"),
    ParamSpec(
        "modes",
        _as_str_list,
        ["iid", "burst-2"],
        "noise modes: independent flips, or correlated adjacent-pair bursts",
    ),
)


def _run_qec(params: Mapping[str, Any], seed: int) -> tuple[Columns, Rows, Summary]:
    for mode in params["modes"]:
        if mode not in ("iid", "burst-2"):
            raise ConfigError(f"unknown noise mode {mode!r}; expected iid or burst-2")
    rng = stream(seed, "qec")
    columns = (
        "mode", "flip_probability", "blocks", "logical_errors", "logical_rate",
        "iid_analytic_rate",
    )
    rows: Rows = []
    for mode in params["modes"]:
        for p in params["flip_probs"]:
            result = attacks.qec_bitflip_experiment(params["blocks"], p, mode=mode, rng=rng)
            rows.append(
                _row(mode, p, result.n_blocks, result.logical_errors,
                     result.logical_error_rate, result.iid_analytic_rate)
            )
    summary: Summary = {
        "majority_crossover_probability": 0.5,
        "correctable_qubit_fraction": 1.0 / 3.0,
    }
    return columns, rows, summary


# ---------------------------------------------------------------------------
# Interlocked split-message exchange
# ---------------------------------------------------------------------------

_INTERLOCK_SPECS = (
    ParamSpec("message_bits", _as_int_list, [2, 8, 16], "message lengths to test (even)"),
    ParamSpec("trials", _as_int, 10_000, "exchanges per message length"),
)


def _run_interlock(params: Mapping[str, Any], seed: int) -> tuple[Columns, Rows, Summary]:
    rng = stream(seed, "interlock")
    trials = params["trials"]
    columns = ("message_bits", "trials", "detected", "detection_rate", "analytic_rate")
    rows: Rows = []
    for k in params["message_bits"]:
        detected = sum(
            attacks.interlock_exchange(k, True, rng).detected for _ in range(trials)
        )
        rows.append(
            _row(k, trials, detected, detected / trials, attacks.interlock_detection_rate(k))
        )
    summary: Summary = {"trials": trials}
    return columns, rows, summary


# ---------------------------------------------------------------------------
# Untrusted-node path decay
# ---------------------------------------------------------------------------

_ALL_KINDS = [k.value for k in network.TopologyKind]


def _parse_kinds(raw: Any) -> list[str]:
    tokens = _as_str_list(raw)
    if tokens == ["all"]:
        return list(_ALL_KINDS)
    for t in tokens:
        if t not in _ALL_KINDS:
            listed = ", ".join(_ALL_KINDS)
            raise ConfigError(f"unknown topology kind {t!r}; expected one of {listed}")
    if len(set(tokens)) != len(tokens):
        raise ConfigError("duplicate topology kinds in list")
    return tokens


_DECAY_SPECS = (
    ParamSpec("kinds", _parse_kinds, list(_ALL_KINDS), "topology families, or 'all'"),
    ParamSpec(
        "fractions",
        _as_float_list,
        [round(0.1 * i, 10) for i in range(9)],
        "compromised-node fractions (range syntax start:stop:step)",
    ),
    ParamSpec("trials", _as_int, 20, "independent topology draws per family"),
    ParamSpec("pairs", _as_int, 20, "endpoint pairs per trial"),
)


def _run_decay(params: Mapping[str, Any], seed: int) -> tuple[Columns, Rows, Summary]:
    rng = stream(seed, "topology-decay")
    table = network.untrusted_node_experiment(
        params["kinds"], params["fractions"], params["trials"], params["pairs"], rng
    )
    columns = ("kind", "fraction", "distance", "mean_count", "std_count", "samples")
    rows = [
        _row(r.kind, r.fraction, r.distance, r.mean_count, r.std_count, r.samples)
        for r in table.rows
    ]
    base = params["fractions"][0]
    summary: Summary = {
        "kinds": list(params["kinds"]),
        "baseline_mean": {
            kind: _py(table.aggregate(kind, base).mean_count) for kind in params["kinds"]
        },
    }
    return columns, rows, summary


# ---------------------------------------------------------------------------
# Route diversion via falsified quality advertisements
# ---------------------------------------------------------------------------

def _as_float_pair(raw: Any) -> tuple[float, float]:
    values = _as_float_list(raw)
    if len(values) != 2 or values[0] > values[1]:
        raise ConfigError(f"expected 'lo,hi' with lo <= hi, got {raw!r}")
    return (values[0], values[1])


_DIVERSION_SPECS = (
    ParamSpec("kind", _parse_kinds, ["grid"], "topology family (single)"),
    ParamSpec("pairs", _as_int, 200, "endpoint pairs routed"),
    ParamSpec("hijacker", _as_int, -1, "advertising node id, or -1 for the middle node"),
    ParamSpec(
        "error_rate_range",
        _as_float_pair,
        (0.0, 0.05),
        "per-node error-rate draw range",
        echo=list,
    ),
    ParamSpec(
        "response_time_range",
        _as_float_pair,
        (10.0, 50.0),
        "per-node response-time draw range (ms)",
        echo=list,
    ),
    ParamSpec("response_time_scale", _as_float, 100.0, "ms of response time worth one error-rate unit"),
)


def _run_diversion(params: Mapping[str, Any], seed: int) -> tuple[Columns, Rows, Summary]:
    kinds = params["kind"]
    if len(kinds) != 1:
        raise ConfigError("diversion runs on a single topology kind")
    rng = stream(seed, "diversion")
    topo_seed = int(rng.integers(0, 2**63))
    topology = network.generate_topology(
        kinds[0],
        topo_seed,
        error_rate_range=params["error_rate_range"],
        response_time_range=params["response_time_range"],
    )
    nodes = sorted(topology.nodes)
    hijacker = params["hijacker"]
    if hijacker == -1:
        hijacker = nodes[len(nodes) // 2]
    result = network.diversion_experiment(
        topology,
        hijacker,
        params["pairs"],
        rng,
        response_time_scale=params["response_time_scale"],
    )
    columns = (
        "source", "target", "honest_hops", "diverted_hops",
        "honest_via_hijacker", "diverted_via_hijacker",
    )
    rows = [
        _row(p.source, p.target, len(p.honest_path) - 1, len(p.diverted_path) - 1,
             p.honest_via_hijacker, p.diverted_via_hijacker)
        for p in result.pairs
    ]
    summary: Summary = {
        "hijacker": hijacker,
        "baseline_fraction": _py(result.baseline_fraction),
        "diverted_fraction": _py(result.diverted_fraction),
        "mean_hop_stretch": _py(result.mean_hop_stretch),
    }
    return columns, rows, summary


# ---------------------------------------------------------------------------
# Connection-flood denial of service
# ---------------------------------------------------------------------------

_DOS_SPECS = (
    ParamSpec("duration", _as_float, 30_000.0, "simulated span in ms"),
    ParamSpec("legit_rate", _as_float, 5.0, "aggregate legitimate request rate per second"),
    ParamSpec("attack_rate", _as_float, 50.0, "aggregate attack request rate per second"),
    ParamSpec("servers", _as_int, 10, "concurrent handshake slots"),
    ParamSpec(
        "mitigation",
        _choice("mitigation", ("none", "rate-limit", "embryonic-cap", "suspicion-scheduler")),
        "none",
        "admission policy at the receiver",
    ),
    ParamSpec("rate", _as_float, 0.5, "rate-limit: tokens per second per source"),
    ParamSpec("burst", _as_int, 2, "rate-limit: bucket depth per source"),
    ParamSpec("cap", _as_int, 8, "embryonic-cap: max half-open handshakes per source"),
    ParamSpec("legit_sources", _as_int, 10, "distinct legitimate sources"),
    ParamSpec("attack_sources", _as_int, 1, "distinct attack sources"),
    ParamSpec("service", _as_float, 500.0, "mean handshake service time in ms"),
    ParamSpec("embryonic_timeout", _as_float, 10_000.0, "half-open hold time before reclaim (ms)"),
    ParamSpec("patience", _as_float, 3_000.0, "legitimate clients abandon after this wait (ms)"),
)


def _build_mitigation(params: Mapping[str, Any]) -> network.Mitigation:
    kind = params["mitigation"]
    if kind == "none":
        return network.Mitigation.none()
    if kind == "rate-limit":
        return network.Mitigation.rate_limit(params["rate"], params["burst"])
    if kind == "embryonic-cap":
        return network.Mitigation.embryonic_cap(params["cap"])
    return network.Mitigation.suspicion_scheduler()


def _run_dos(params: Mapping[str, Any], seed: int) -> tuple[Columns, Rows, Summary]:
    rng = stream(seed, "dos")
    result = network.dos_simulate(
        params["duration"],
        params["legit_rate"],
        params["attack_rate"],
        params["servers"],
        _build_mitigation(params),
        rng,
        n_legit_sources=params["legit_sources"],
        n_attack_sources=params["attack_sources"],
        mean_service_ms=params["service"],
        embryonic_timeout_ms=params["embryonic_timeout"],
        patience_ms=params["patience"],
    )
    columns = (
        "mitigation", "duration_ms", "servers",
        "legit_arrivals", "attack_arrivals", "legit_served", "attack_served",
        "legit_dropped", "attack_dropped", "legit_blocked", "attack_blocked",
        "legit_still_queued", "attack_still_queued", "mean_legit_wait_ms",
        "legit_served_fraction", "attack_served_fraction", "conservation_ok",
    )
    row = _row(
        result.mitigation, result.duration_ms, result.n_servers,
        result.legit_arrivals, result.attack_arrivals, result.legit_served,
        result.attack_served, result.legit_dropped, result.attack_dropped,
        result.legit_blocked, result.attack_blocked, result.legit_still_queued,
        result.attack_still_queued, result.mean_legit_wait_ms,
        result.legit_served_fraction, result.attack_served_fraction,
        result.conservation_ok(),
    )
    summary: Summary = {
        "mitigation": result.mitigation,
        "legit_served_fraction": _py(result.legit_served_fraction),
        "attack_served_fraction": _py(result.attack_served_fraction),
        "mean_legit_wait_ms": _py(result.mean_legit_wait_ms),
        "conservation_ok": result.conservation_ok(),
    }
    return columns, [row], summary


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

EXPERIMENTS: dict[str, ExperimentDef] = {
    e.name: e
    for e in (
        ExperimentDef(
            "pns",
            "photon-number distributions seen by the receiver under splitting attacks",
            _PNS_SPECS,
            _run_pns,
        ),
        ExperimentDef(
            "trojan",
            "cumulative information gain of a back-reflection probe",
            _TROJAN_SPECS,
            _run_trojan,
        ),
        ExperimentDef(
            "bb84",
            "prepare-and-measure key exchange with optional in-flight attack",
            _BB84_SPECS,
            _run_bb84,
        ),
        ExperimentDef(
            "e91",
            "entanglement-based key exchange with correlation verification",
            _E91_SPECS,
            _run_e91,
        ),
        ExperimentDef(
            "relay",
            "key transport across trusted relays, logging every cleartext exposure",
            _RELAY_SPECS,
            _run_relay,
        ),
        ExperimentDef(
            "decoy",
            "multi-intensity gain consistency check against splitting attacks",
            _DECOY_SPECS,
            _run_decoy,
        ),
        ExperimentDef(
            "qec",
            "three-qubit repetition code under independent and burst noise",
            _QEC_SPECS,
            _run_qec,
        ),
        ExperimentDef(
            "interlock",
            "split-message exchange detection rate against a relay attacker",
            _INTERLOCK_SPECS,
            _run_interlock,
        ),
        ExperimentDef(
            "topology-decay",
            "viable-path decay as nodes become untrusted, across topology families",
            _DECAY_SPECS,
            _run_decay,
        ),
        ExperimentDef(
            "diversion",
            "traffic attraction from a falsified zero-cost advertisement",
            _DIVERSION_SPECS,
            _run_diversion,
        ),
        ExperimentDef(
            "dos",
            "connection-flood handshake exhaustion under admission policies",
            _DOS_SPECS,
            _run_dos,
        ),
    )
}


def get_experiment(name: str) -> ExperimentDef:
    exp = EXPERIMENTS.get(name)
    if exp is None:
        listed = ", ".join(sorted(EXPERIMENTS))
        raise ConfigError(f"unknown experiment {name!r}; expected one of {listed}")
    return exp
