"""Key-distribution protocols and their classical post-processing.

Covers prepare-and-measure exchange (BB84-style), entanglement-based exchange
with a CHSH self-test (E91-style), trusted-relay key forwarding, and the
decoy-intensity consistency test against photon-number-splitting taps.

Protocols accept attack hooks so the same code path produces both honest and
adversarial runs: an in-flight hook rewrites each flying qubit, a pair hook
rewrites each distributed pair.  All randomness flows through an explicit
generator; see :mod:`qntl.stats` for stream construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.signal import fftconvolve

from .attacks import PnsStrategy, pns_transform_counts
from .photonics import (
    SIGNAL,
    Detector,
    IntensityLabel,
    LossChannel,
    PhotonSource,
    detect,
    emit_pulse,
    transmit,
)
from .quantum import Basis, PureState, bell_pair, encoded_qubit, measure_qubit, measure_rotated
from .stats import chsh_estimate, poisson_sample_array, stream

__all__ = [
    "DEFAULT_ABORT_THRESHOLD",
    "DEFAULT_DISCLOSED_FRACTION",
    "DEFAULT_HASH_SEED",
    "CHSH_TEST_FRACTION",
    "CHSH_DETECTION_MARGIN",
    "ALICE_TEST_ANGLES",
    "BOB_TEST_ANGLES",
    "InFlightHook",
    "PairHook",
    "QkdSession",
    "sift_keys",
    "estimate_qber",
    "privacy_amplify",
    "run_bb84",
    "run_e91",
    "RelayExposure",
    "RelayChainResult",
    "relay_forward_key",
    "relay_recover_key",
    "run_relay_chain",
    "DecoyIntensity",
    "DecoyTally",
    "DecoyAssessment",
    "DecoyAnalysis",
    "simulate_decoy_transmissions",
    "decoy_state_analysis",
]

# Abort when the disclosed-sample error rate exceeds this; the 11% figure is
# the usual one-way post-processing limit for prepare-and-measure exchange.
DEFAULT_ABORT_THRESHOLD = 0.11
DEFAULT_DISCLOSED_FRACTION = 0.1

# Seed for the Toeplitz hashing stream.  Fixed by convention: both ends must
# derive the identical compression matrix, so it is public protocol state,
# not secret randomness.
DEFAULT_HASH_SEED = 0x9E3779B9

# Entanglement-based exchange: fraction of rounds diverted to the CHSH test,
# the analyzer settings used there, and the acceptance margin above the
# classical bound of 2.
CHSH_TEST_FRACTION = 0.25
CHSH_DETECTION_MARGIN = 0.1
ALICE_TEST_ANGLES = (0.0, math.pi / 4)
BOB_TEST_ANGLES = (math.pi / 8, 3 * math.pi / 8)

InFlightHook = Callable[[PureState, Basis, np.random.Generator], PureState]
PairHook = Callable[[PureState, np.random.Generator], PureState]

_BASES = (Basis.RECTILINEAR, Basis.DIAGONAL)


@dataclass(frozen=True, eq=False)
class QkdSession:
    """Outcome of one key-exchange session.

    ``final_key`` holds the sender-side amplified key (empty when the session
    aborted or amplification consumed everything).  For entanglement-based
    runs ``chsh_estimate`` and ``chsh_rounds`` describe the self-test;
    prepare-and-measure runs leave them at None/0.
    """

    protocol: str
    n_rounds: int
    sifted_alice: np.ndarray
    sifted_bob: np.ndarray
    disclosed_count: int
    qber_estimate: float
    leaked_bits: int
    final_key: np.ndarray
    aborted: bool
    abort_reason: str | None
    eavesdrop_detected: bool
    chsh_estimate: float | None = None
    chsh_rounds: int = 0

    def __post_init__(self) -> None:
        for name in ("sifted_alice", "sifted_bob", "final_key"):
            arr = np.asarray(getattr(self, name), dtype=np.int8)
            arr = np.array(arr, copy=True)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.sifted_alice.size != self.sifted_bob.size:
            raise ValueError("sifted key halves must have equal length")

    @property
    def sifted_count(self) -> int:
        return int(self.sifted_alice.size)

    @property
    def final_key_bits(self) -> int:
        return int(self.final_key.size)


def sift_keys(
    alice_bits: np.ndarray,
    alice_bases: np.ndarray,
    bob_bits: np.ndarray,
    bob_bases: np.ndarray,
    detected: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Keep the rounds where both sides used the same basis (and, when a
    detection mask is given, where the receiver actually saw the pulse).

    Basis arrays may use any equality-comparable encoding as long as both
    sides use the same one.
    """
    a_bits = np.asarray(alice_bits)
    b_bits = np.asarray(bob_bits)
    a_bases = np.asarray(alice_bases)
    b_bases = np.asarray(bob_bases)
    n = a_bits.size
    if not (b_bits.size == a_bases.size == b_bases.size == n):
        raise ValueError("per-round arrays must have equal length")
    mask = a_bases == b_bases
    if detected is not None:
        det = np.asarray(detected, dtype=bool)
        if det.size != n:
            raise ValueError("detection mask length does not match rounds")
        mask &= det
    return a_bits[mask].astype(np.int8), b_bits[mask].astype(np.int8)


def estimate_qber(
    sifted_alice: np.ndarray,
    sifted_bob: np.ndarray,
    disclosed_fraction: float,
    rng: np.random.Generator,
) -> tuple[float, np.ndarray]:
    """Disclose a random sample of the sifted key and compare it publicly.

    Returns (error rate over the sample, indices disclosed).  The sample size
    is ceil(fraction * length), so any positive fraction discloses at least
    one bit; disclosed bits must be discarded from the key afterwards.
    """
    a = np.asarray(sifted_alice)
    b = np.asarray(sifted_bob)
    if a.size != b.size:
        raise ValueError("sifted key halves must have equal length")
    n = a.size
    k = math.ceil(float(disclosed_fraction) * n)
    if k <= 0 or n == 0:
        raise ValueError("disclosed sample is empty; cannot estimate the error rate")
    k = min(k, n)
    indices = rng.choice(n, size=k, replace=False)
    qber = float(np.count_nonzero(a[indices] != b[indices]) / k)
    return qber, np.sort(indices)


def privacy_amplify(
    bits: np.ndarray,
    leaked_bits: int,
    safety_margin: int = 0,
    hash_seed: int = DEFAULT_HASH_SEED,
) -> np.ndarray:
    """Compress a partially leaked key with a random Toeplitz hash.

    The output length is len(bits) - leaked_bits - safety_margin; when that
    is not positive the key is spent and an empty array comes back.  The
    Toeplitz diagonals are drawn from a stream seeded by ``hash_seed``, which
    is public shared state (both ends must build the same matrix), so the
    same input always hashes to the same output.
    """
    x = np.asarray(bits, dtype=np.int64)
    if x.ndim != 1:
        raise ValueError("key bits must be a 1-d array")
    if x.size and not np.all((x == 0) | (x == 1)):
        raise ValueError("key bits must be 0/1")
    leaked = int(leaked_bits)
    margin = int(safety_margin)
    if leaked < 0 or margin < 0:
        raise ValueError("leaked bits and safety margin must be >= 0")
    n = x.size
    m = n - leaked - margin
    if m <= 0:
        return np.zeros(0, dtype=np.int8)
    diagonals = stream(hash_seed, "toeplitz-hash").integers(0, 2, size=n + m - 1)
    # Row j of the Toeplitz matrix is diagonals[n-1+j : j-1 : -1], so the
    # product against x is a slice of the full convolution.  Counts stay far
    # below 2**53, making the rounded FFT convolution exact.
    full = fftconvolve(x.astype(float), diagonals.astype(float))
    products = np.rint(full[n - 1 : n - 1 + m]).astype(np.int64)
    return (products & 1).astype(np.int8)


def _finalize_keys(
    protocol: str,
    n_rounds: int,
    sifted_a: np.ndarray,
    sifted_b: np.ndarray,
    disclosed_fraction: float,
    abort_threshold: float,
    rng: np.random.Generator,
    chsh: float | None = None,
    chsh_rounds: int = 0,
    chsh_failed: bool = False,
) -> QkdSession:
    """Shared post-processing tail: disclosure, abort decision, amplification."""
    empty = np.zeros(0, dtype=np.int8)
    if sifted_a.size == 0:
        return QkdSession(
            protocol=protocol,
            n_rounds=n_rounds,
            sifted_alice=empty,
            sifted_bob=empty,
            disclosed_count=0,
            qber_estimate=float("nan"),
            leaked_bits=0,
            final_key=empty,
            aborted=True,
            abort_reason="no sifted bits",
            eavesdrop_detected=chsh_failed,
            chsh_estimate=chsh,
            chsh_rounds=chsh_rounds,
        )
    qber, disclosed_idx = estimate_qber(sifted_a, sifted_b, disclosed_fraction, rng)
    keep = np.ones(sifted_a.size, dtype=bool)
    keep[disclosed_idx] = False
    remainder_a = sifted_a[keep]
    if chsh_failed:
        aborted, reason, detected = True, "entanglement verification failed", True
    elif qber > abort_threshold:
        aborted, reason, detected = True, "error rate above abort threshold", True
    else:
        aborted, reason, detected = False, None, False
    if aborted:
        leaked = 0
        final = empty
    else:
        leaked = math.ceil(qber * remainder_a.size)
        final = privacy_amplify(remainder_a, leaked)
    return QkdSession(
        protocol=protocol,
        n_rounds=n_rounds,
        sifted_alice=sifted_a,
        sifted_bob=sifted_b,
        disclosed_count=int(disclosed_idx.size),
        qber_estimate=qber,
        leaked_bits=leaked,
        final_key=final,
        aborted=aborted,
        abort_reason=reason,
        eavesdrop_detected=detected,
        chsh_estimate=chsh,
        chsh_rounds=chsh_rounds,
    )


def run_bb84(
    n_rounds: int,
    rng: np.random.Generator,
    *,
    source: PhotonSource | None = None,
    channel: LossChannel | None = None,
    detector: Detector | None = None,
    eavesdropper: InFlightHook | None = None,
    disclosed_fraction: float = DEFAULT_DISCLOSED_FRACTION,
    abort_threshold: float = DEFAULT_ABORT_THRESHOLD,
) -> QkdSession:
    """Prepare-and-measure key exchange over ``n_rounds`` pulses.

    The sender encodes a fresh random bit in a random basis each round; the
    receiver measures in an independently random basis.  ``eavesdropper``
    (if any) rewrites the flying qubit given (state, sender basis, rng).
    With an ideal single-photon source, no channel, and no eavesdropper the
    sifted error rate is exactly zero.

    Photon statistics from a weak-coherent ``source`` and losses from
    ``channel``/``detector`` gate which rounds the receiver registers; the
    qubit degree of freedom itself is tracked exactly once per registered
    pulse.  Splitting attacks that exploit multi-photon pulses are treated
    by the decoy-intensity machinery, not here.
    """
    if n_rounds <= 0:
        raise ValueError("need at least one round")
    if not 0.0 < disclosed_fraction < 1.0:
        raise ValueError("disclosed fraction must lie strictly between 0 and 1")
    if source is None:
        source = PhotonSource.ideal_single_photon()
    if detector is None:
        detector = Detector()

    alice_bits = np.zeros(n_rounds, dtype=np.int8)
    alice_bases = np.zeros(n_rounds, dtype=np.int8)
    bob_bits = np.zeros(n_rounds, dtype=np.int8)
    bob_bases = np.zeros(n_rounds, dtype=np.int8)
    detected = np.zeros(n_rounds, dtype=bool)

    for i in range(n_rounds):
        bit = int(rng.integers(0, 2))
        a_idx = int(rng.integers(0, 2))
        b_idx = int(rng.integers(0, 2))
        a_basis = _BASES[a_idx]
        b_basis = _BASES[b_idx]
        pulse = emit_pulse(source, bit, a_basis, 0.0, SIGNAL, rng)
        if channel is not None:
            pulse = transmit(pulse, channel, rng)
        click = detect(pulse, detector, rng)
        alice_bits[i] = bit
        alice_bases[i] = a_idx
        bob_bases[i] = b_idx
        detected[i] = click
        if not click:
            continue
        state = encoded_qubit(bit, a_basis)
        if eavesdropper is not None:
            state = eavesdropper(state, a_basis, rng)
        bob_bits[i] = measure_qubit(state, 0, b_basis, rng).bit

    sifted_a, sifted_b = sift_keys(alice_bits, alice_bases, bob_bits, bob_bases, detected)
    return _finalize_keys(
        "bb84", n_rounds, sifted_a, sifted_b, disclosed_fraction, abort_threshold, rng
    )


def run_e91(
    n_rounds: int,
    rng: np.random.Generator,
    *,
    pair_hook: PairHook | None = None,
    chsh_fraction: float = CHSH_TEST_FRACTION,
    detection_margin: float = CHSH_DETECTION_MARGIN,
    disclosed_fraction: float = DEFAULT_DISCLOSED_FRACTION,
    abort_threshold: float = DEFAULT_ABORT_THRESHOLD,
) -> QkdSession:
    """Entanglement-based key exchange with an interleaved CHSH self-test.

    Each round distributes a fresh phi+ pair (qubit 0 to the sender, qubit 1
    to the receiver), optionally rewritten by ``pair_hook``.  A random
    ``chsh_fraction`` of rounds is measured at the test settings instead of
    the key bases; the session aborts when the resulting CHSH estimate fails
    to clear 2 + ``detection_margin``.  An honest pair gives about 2.83; any
    interception that breaks the entanglement drags the estimate to 2 or
    below, so the margin flags it.
    """
    if n_rounds <= 0:
        raise ValueError("need at least one round")
    if not 0.0 < chsh_fraction < 1.0:
        raise ValueError("test fraction must lie strictly between 0 and 1")
    if not 0.0 < disclosed_fraction < 1.0:
        raise ValueError("disclosed fraction must lie strictly between 0 and 1")

    honest_pair = bell_pair()
    a_bits: list[int] = []
    b_bits: list[int] = []
    a_bases: list[int] = []
    b_bases: list[int] = []
    test_a: list[int] = []
    test_b: list[int] = []
    products: list[int] = []

    for _ in range(n_rounds):
        is_test = rng.random() < chsh_fraction
        state = honest_pair
        if pair_hook is not None:
            state = pair_hook(state, rng)
        if is_test:
            a_idx = int(rng.integers(0, 2))
            b_idx = int(rng.integers(0, 2))
            first = measure_rotated(state, 0, ALICE_TEST_ANGLES[a_idx], rng)
            second = measure_rotated(first.post_state, 1, BOB_TEST_ANGLES[b_idx], rng)
            test_a.append(a_idx)
            test_b.append(b_idx)
            products.append((1 - 2 * first.bit) * (1 - 2 * second.bit))
        else:
            a_idx = int(rng.integers(0, 2))
            b_idx = int(rng.integers(0, 2))
            first = measure_qubit(state, 0, _BASES[a_idx], rng)
            second = measure_qubit(first.post_state, 1, _BASES[b_idx], rng)
            a_bits.append(first.bit)
            b_bits.append(second.bit)
            a_bases.append(a_idx)
            b_bases.append(b_idx)

    try:
        s_value = chsh_estimate(np.array(test_a), np.array(test_b), np.array(products))
    except ValueError:
        s_value = float("nan")
    chsh_failed = not (s_value > 2.0 + detection_margin)  # NaN counts as failed

    sifted_a, sifted_b = sift_keys(
        np.array(a_bits, dtype=np.int8),
        np.array(a_bases, dtype=np.int8),
        np.array(b_bits, dtype=np.int8),
        np.array(b_bases, dtype=np.int8),
    )
    return _finalize_keys(
        "e91",
        n_rounds,
        sifted_a,
        sifted_b,
        disclosed_fraction,
        abort_threshold,
        rng,
        chsh=s_value,
        chsh_rounds=len(products),
        chsh_failed=chsh_failed,
    )


# ---------------------------------------------------------------------------
# Trusted-relay key forwarding
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RelayExposure:
    """Cleartext sighting of the end-to-end key inside one relay."""

    relay_index: int
    cleartext: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(np.asarray(self.cleartext, dtype=np.int8), copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "cleartext", arr)


@dataclass(frozen=True, eq=False)
class RelayChainResult:
    """Trace of an end-to-end key hopping across trusted relays.

    ``exposures`` has one entry per relay; relays are confidentiality
    boundaries, so each entry's cleartext equals the original key whenever
    ``recovered_ok`` holds.
    """

    n_relays: int
    key: np.ndarray
    delivered: np.ndarray
    recovered_ok: bool
    exposures: tuple[RelayExposure, ...]
    wire_ciphertexts: tuple[np.ndarray, ...]

    @property
    def n_hops(self) -> int:
        return self.n_relays + 1

    def exposure_for(self, relay_index: int) -> RelayExposure:
        for item in self.exposures:
            if item.relay_index == relay_index:
                return item
        raise KeyError(f"no exposure recorded for relay {relay_index}")


def _check_bits(arr: np.ndarray, what: str) -> np.ndarray:
    out = np.asarray(arr, dtype=np.int8)
    if out.ndim != 1 or out.size == 0:
        raise ValueError(f"{what} must be a non-empty 1-d bit array")
    if not np.all((out == 0) | (out == 1)):
        raise ValueError(f"{what} must contain only 0/1")
    return out


def relay_forward_key(cleartext: np.ndarray, hop_key: np.ndarray) -> np.ndarray:
    """One-time-pad the key for the next hop."""
    c = _check_bits(cleartext, "cleartext")
    h = _check_bits(hop_key, "hop key")
    if c.size != h.size:
        raise ValueError("hop key length must match the key")
    return c ^ h

def relay_recover_key(ciphertext: np.ndarray, hop_key: np.ndarray) -> np.ndarray:
    """Strip a hop's one-time pad: the inverse of :func:`relay_forward_key`."""
    return relay_forward_key(ciphertext, hop_key)


def run_relay_chain(
    key: np.ndarray,
    n_relays: int,
    rng: np.random.Generator,
) -> RelayChainResult:
    """Forward an end-to-end key through ``n_relays`` trusted relays.

    Each of the n_relays + 1 hops is protected by its own fresh hop key, and
    each relay must fully decrypt before re-encrypting, so the key is seen in
    cleartext at every relay.  That sighting, not any wire weakness, is the
    attack surface this models: one compromised relay yields the whole key.
    """
    k = _check_bits(key, "key")
    n = int(n_relays)
    if n < 1:
        raise ValueError("need at least one relay")
    hop_keys = [rng.integers(0, 2, size=k.size, dtype=np.int8) for _ in range(n + 1)]
    exposures: list[RelayExposure] = []
    wire: list[np.ndarray] = []
    ciphertext = relay_forward_key(k, hop_keys[0])
    wire.append(ciphertext)
    for relay_index in range(1, n + 1):
        cleartext = relay_recover_key(ciphertext, hop_keys[relay_index - 1])
        exposures.append(RelayExposure(relay_index=relay_index, cleartext=cleartext))
        ciphertext = relay_forward_key(cleartext, hop_keys[relay_index])
        wire.append(ciphertext)
    delivered = relay_recover_key(ciphertext, hop_keys[n])
    return RelayChainResult(
        n_relays=n,
        key=k,
        delivered=delivered,
        recovered_ok=bool(np.array_equal(delivered, k)),
        exposures=tuple(exposures),
        wire_ciphertexts=tuple(wire),
    )


# ---------------------------------------------------------------------------
# Decoy-intensity consistency test
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecoyIntensity:
    """One publicly announced pulse class: its label, mean, and volume."""

    label: IntensityLabel
    mean_photons: float
    n_pulses: int

    def __post_init__(self) -> None:
        if float(self.mean_photons) < 0.0:
            raise ValueError("mean photon number must be >= 0")
        if int(self.n_pulses) <= 0:
            raise ValueError("pulse count must be positive")


@dataclass(frozen=True)
class DecoyTally:
    """Raw click bookkeeping for one intensity class."""

    label: str
    mean_photons: float
    sent: int
    detected: int

    @property
    def gain(self) -> float:
        return self.detected / self.sent


@dataclass(frozen=True)
class DecoyAssessment:
    """One intensity's measured gain against the honest-channel model."""

    label: str
    mean_photons: float
    sent: int
    detected: int
    gain: float
    model_gain: float
    relative_deviation: float


@dataclass(frozen=True)
class DecoyAnalysis:
    """Verdict of the decoy consistency test.

    ``eavesdrop_detected`` fires when any intensity's gain deviates from the
    honest-channel model by more than the threshold.  The single-photon
    yield lower bound collapses toward zero under a blocking splitter even
    though every individual gain might look plausible in isolation.
    """

    assessments: tuple[DecoyAssessment, ...]
    deviation_threshold: float
    max_relative_deviation: float
    eavesdrop_detected: bool
    vacuum_yield: float
    single_photon_yield_lower_bound: float | None


def simulate_decoy_transmissions(
    intensities: Sequence[DecoyIntensity],
    channel: LossChannel,
    detector: Detector,
    rng: np.random.Generator,
    attacker: PnsStrategy | None = None,
) -> list[DecoyTally]:
    """Send each intensity class and tally receiver clicks.

    Without an attacker, photons thin through the loss channel, so the click
    statistics follow the Poisson gain model.  With a splitting ``attacker``,
    the attacker taps at the source, forwards her chosen photon numbers over
    a lossless bypass (the strongest version of the attack: she replaces the
    lossy fiber), and the channel transmittance never applies.
    """
    if not intensities:
        raise ValueError("need at least one intensity class")
    labels = [str(item.label) for item in intensities]
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate intensity labels: {labels}")
    tallies: list[DecoyTally] = []
    for item, label in zip(intensities, labels):
        counts = poisson_sample_array(item.mean_photons, rng, item.n_pulses)
        if attacker is None:
            arriving = rng.binomial(counts, channel.transmittance)
        else:
            _, arriving = pns_transform_counts(counts, attacker, rng)
        p_click = 1.0 - (1.0 - detector.dark_count_prob) * (
            (1.0 - detector.efficiency) ** arriving
        )
        clicks = int(np.count_nonzero(rng.random(item.n_pulses) < p_click))
        tallies.append(
            DecoyTally(
                label=label,
                mean_photons=float(item.mean_photons),
                sent=int(item.n_pulses),
                detected=clicks,
            )
        )
    return tallies


def _model_gain(mu: float, channel: LossChannel, detector: Detector) -> float:
    """Honest-channel click probability for a Poisson pulse of mean ``mu``."""
    survive = channel.transmittance * detector.efficiency
    return 1.0 - (1.0 - detector.dark_count_prob) * math.exp(-survive * mu)


def decoy_state_analysis(
    tallies: Sequence[DecoyTally],
    channel: LossChannel,
    detector: Detector,
    deviation_threshold: float = 0.1,
) -> DecoyAnalysis:
    """Compare measured gains with the honest-channel model.

    Requires at least two intensity classes with at least 10^3 pulses each;
    fewer classes cannot separate single-photon from multi-photon behavior
    and smaller samples drown the comparison in shot noise.  Also reports
    the standard two-intensity lower bound on the single-photon yield, using
    the vacuum class for the background estimate when one was sent.
    """
    if len(tallies) < 2:
        raise ValueError("decoy analysis needs at least two intensity classes")
    for tally in tallies:
        if tally.sent < 1000:
            raise ValueError(
                f"intensity {tally.label!r} has only {tally.sent} pulses; need at least 1000"
            )
    assessments = []
    for tally in tallies:
        model = _model_gain(tally.mean_photons, channel, detector)
        if model > 0.0:
            deviation = abs(tally.gain - model) / model
        else:
            deviation = 0.0 if tally.gain == 0.0 else float("inf")
        assessments.append(
            DecoyAssessment(
                label=tally.label,
                mean_photons=tally.mean_photons,
                sent=tally.sent,
                detected=tally.detected,
                gain=tally.gain,
                model_gain=model,
                relative_deviation=deviation,
            )
        )
    # Vacuum classes estimate background only: their model gain is the dark
    # probability, so the relative scale is shot-noise dominated at any
    # practical volume and would false-alarm on an honest channel.
    alarmed = [a for a in assessments if a.mean_photons > 0.0]
    worst = max((item.relative_deviation for item in alarmed), default=0.0)

    vacuum = [t for t in tallies if t.mean_photons == 0.0]
    y0 = vacuum[0].gain if vacuum else float(detector.dark_count_prob)

    y1_bound: float | None = None
    positive = sorted((t for t in tallies if t.mean_photons > 0.0), key=lambda t: t.mean_photons)
    if len(positive) >= 2 and positive[-1].mean_photons > positive[0].mean_photons:
        nu, mu = positive[0], positive[-1]
        v, u = nu.mean_photons, mu.mean_photons
        # Two-intensity bound: Y1 >= u/(u v - v^2) *
        #   (Q_v e^v - Q_u e^u v^2/u^2 - (u^2 - v^2)/u^2 * Y0)
        bracket = (
            nu.gain * math.exp(v)
            - mu.gain * math.exp(u) * (v * v) / (u * u)
            - (u * u - v * v) / (u * u) * y0
        )
        y1_bound = max(0.0, u / (u * v - v * v) * bracket)

    return DecoyAnalysis(
        assessments=tuple(assessments),
        deviation_threshold=float(deviation_threshold),
        max_relative_deviation=worst,
        eavesdrop_detected=worst > deviation_threshold,
        vacuum_yield=y0,
        single_photon_yield_lower_bound=y1_bound,
    )
