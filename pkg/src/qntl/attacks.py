"""Attack models: photon-number splitting, Trojan-horse probing, entangling
probes, interlock spoofing, intercept-resend, and code-aware noise.

Each attack exposes both the single-shot operation a protocol hooks into and,
where the reproduced experiments need volume, a vectorized experiment driver
with identical semantics.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Mapping, Sequence

import numpy as np

from .photonics import PhotonPulse
from .quantum import (
    Basis,
    MeasurementOutcome,
    PureState,
    apply_cnot,
    basis_state,
    encoded_qubit,
    measure_qubit,
)
from .stats import Histogram, ZScoreSeries, poisson_sample_array, zscore_compare

__all__ = [
    "BASIS_RECT",
    "BASIS_DIAG",
    "PnsVariant",
    "PnsStrategy",
    "PnsExperimentResult",
    "pns_intercept",
    "pns_transform_counts",
    "pns_experiment",
    "TrojanVariant",
    "TrojanPolicy",
    "GainLedger",
    "photon_gain_increment",
    "trojan_gain_experiment",
    "probe_infiltrate",
    "probe_hook",
    "InterlockTranscript",
    "interlock_exchange",
    "interlock_detection_rate",
    "intercept_resend",
    "BitFlipCodeWord",
    "encode_bitflip",
    "QecResult",
    "qec_bitflip_experiment",
    "iid_logical_error_rate",
]

# Basis tags used in gain bookkeeping: +1 rectilinear, -1 diagonal.
BASIS_RECT = 1
BASIS_DIAG = -1


# ---------------------------------------------------------------------------
# Photon-number splitting
# ---------------------------------------------------------------------------

class PnsVariant(Enum):
    NO_EVE = "no-eve"
    RANDOM_INTERCEPT = "random-intercept"
    ALWAYS_MINUS_ONE = "always-minus-one"
    BLOCK_SINGLES = "block-singles"


@dataclass(frozen=True)
class PnsStrategy:
    """Photon-number splitting behavior at the tap point.

    no-eve forwards pulses untouched; random-intercept skims each photon
    independently with the given probability; always-minus-one takes exactly
    one photon when there is one to take; block-singles suppresses every
    pulse carrying fewer than two photons and forwards exactly one photon of
    each multi-photon pulse (the signature the decoy-state test looks for).
    """

    variant: PnsVariant
    intercept_probability: float = 0.5

    def __post_init__(self) -> None:
        q = float(self.intercept_probability)
        if not 0.0 <= q <= 1.0:
            raise ValueError(f"intercept probability must lie in [0, 1], got {q}")
        object.__setattr__(self, "intercept_probability", q)

    @classmethod
    def no_eve(cls) -> "PnsStrategy":
        return cls(PnsVariant.NO_EVE)

    @classmethod
    def random_intercept(cls, probability: float = 0.5) -> "PnsStrategy":
        return cls(PnsVariant.RANDOM_INTERCEPT, probability)

    @classmethod
    def always_minus_one(cls) -> "PnsStrategy":
        return cls(PnsVariant.ALWAYS_MINUS_ONE)

    @classmethod
    def block_singles(cls) -> "PnsStrategy":
        return cls(PnsVariant.BLOCK_SINGLES)

    def label(self) -> str:
        if self.variant is PnsVariant.RANDOM_INTERCEPT:
            return f"random-{self.intercept_probability:g}"
        return self.variant.value


def pns_intercept(
    pulse: PhotonPulse,
    strategy: PnsStrategy,
    rng: np.random.Generator,
) -> tuple[int, PhotonPulse]:
    """Apply a splitting strategy to one pulse.

    Returns (photons kept by the eavesdropper, forwarded pulse).  Photons are
    conserved: kept + forwarded == original count, always.
    """
    count = pulse.photon_count
    if strategy.variant is PnsVariant.NO_EVE:
        taken = 0
    elif strategy.variant is PnsVariant.ALWAYS_MINUS_ONE:
        taken = min(1, count)
    elif strategy.variant is PnsVariant.RANDOM_INTERCEPT:
        if count == 0:
            taken = 0
        else:
            taken = int(np.count_nonzero(rng.random(count) < strategy.intercept_probability))
    else:  # BLOCK_SINGLES: forward one photon only from multi-photon pulses
        taken = count if count < 2 else count - 1
    return taken, replace(pulse, photon_count=count - taken)


def pns_transform_counts(
    counts: np.ndarray,
    strategy: PnsStrategy,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized strategy semantics over an array of photon counts.

    Returns (taken, forwarded) arrays with taken + forwarded == counts.
    """
    counts = np.asarray(counts, dtype=np.int64)
    if strategy.variant is PnsVariant.NO_EVE:
        taken = np.zeros_like(counts)
    elif strategy.variant is PnsVariant.ALWAYS_MINUS_ONE:
        taken = np.minimum(counts, 1)
    elif strategy.variant is PnsVariant.RANDOM_INTERCEPT:
        taken = rng.binomial(counts, strategy.intercept_probability)
    else:
        taken = np.where(counts < 2, counts, counts - 1)
    return taken, counts - taken


@dataclass(frozen=True)
class PnsExperimentResult:
    """Received-count distributions per strategy, with per-bin z-scores
    against an independently seeded no-eavesdropper baseline."""

    mean_photons: float
    n_pulses: int
    baseline: Histogram
    histograms: Mapping[str, Histogram]
    zscores: Mapping[str, ZScoreSeries]

    def max_abs_z(self, label: str) -> float:
        return self.zscores[label].max_abs


def pns_experiment(
    n_pulses: int,
    mean_photons: float,
    strategies: Sequence[PnsStrategy],
    rng: np.random.Generator,
    max_bin: int = 20,
) -> PnsExperimentResult:
    """Distribution experiment: emit Poisson pulses, apply each strategy,
    histogram what the receiver sees.

    Each strategy (and the baseline) runs on its own child stream spawned
    from ``rng``, so a listed no-eve strategy is compared against a
    differently seeded copy of itself, which is the intended null case.
    """
    if n_pulses < 10_000:
        raise ValueError("distribution experiment needs at least 10^4 pulses")
    if not strategies:
        raise ValueError("need at least one strategy")
    labels = [s.label() for s in strategies]
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate strategy labels: {labels}")
    children = rng.spawn(len(strategies) + 1)
    base_counts = poisson_sample_array(mean_photons, children[0], n_pulses)
    baseline = Histogram.from_samples(base_counts, max_bin=max_bin)
    histograms: dict[str, Histogram] = {}
    zscores: dict[str, ZScoreSeries] = {}
    for strategy, label, child in zip(strategies, labels, children[1:]):
        emitted = poisson_sample_array(mean_photons, child, n_pulses)
        _, forwarded = pns_transform_counts(emitted, strategy, child)
        hist = Histogram.from_samples(forwarded, max_bin=max_bin)
        histograms[label] = hist
        zscores[label] = zscore_compare(hist, baseline)
    return PnsExperimentResult(
        mean_photons=float(mean_photons),
        n_pulses=int(n_pulses),
        baseline=baseline,
        histograms=histograms,
        zscores=zscores,
    )


# ---------------------------------------------------------------------------
# Trojan-horse probing
# ---------------------------------------------------------------------------

class TrojanVariant(Enum):
    NO_SHIFT = "no-shift"
    FIXED_SHIFT = "fixed-shift"
    RANDOM_SHIFT = "random-shift"


@dataclass(frozen=True)
class TrojanPolicy:
    """Sender-side phase policy applied to diagonally encoded photons."""

    variant: TrojanVariant
    shift: float = 0.0

    def __post_init__(self) -> None:
        theta = float(self.shift)
        if not 0.0 <= theta < 2.0 * math.pi:
            raise ValueError(f"phase shift must lie in [0, 2*pi), got {theta}")
        object.__setattr__(self, "shift", theta)

    @classmethod
    def no_shift(cls) -> "TrojanPolicy":
        return cls(TrojanVariant.NO_SHIFT)

    @classmethod
    def fixed_shift(cls, theta: float) -> "TrojanPolicy":
        return cls(TrojanVariant.FIXED_SHIFT, theta)

    @classmethod
    def random_shift(cls) -> "TrojanPolicy":
        return cls(TrojanVariant.RANDOM_SHIFT)

    def label(self) -> str:
        if self.variant is TrojanVariant.FIXED_SHIFT:
            return f"fixed-{self.shift:g}"
        return self.variant.value


def photon_gain_increment(eve_basis: int, alice_basis: int, phase_shift: float) -> float:
    """Expected information gain from one probed photon.

    A wrong basis guess is worth 1/2.  A correct rectilinear guess reads the
    photon perfectly (gain 1), phase shifts being invisible in that basis.  A
    correct diagonal guess is perfect only when no phase shift was applied;
    any shift randomizes the read-out to the coin-flip value
    cos^2(theta/2)/2 + sin^2(theta/2)/2.
    """
    if eve_basis not in (BASIS_RECT, BASIS_DIAG) or alice_basis not in (BASIS_RECT, BASIS_DIAG):
        raise ValueError("basis tags must be +1 (rectilinear) or -1 (diagonal)")
    if eve_basis != alice_basis:
        return 0.5
    if alice_basis == BASIS_RECT:
        return 1.0
    if phase_shift == 0.0:
        return 1.0
    half = 0.5 * phase_shift
    return 0.5 * math.cos(half) ** 2 + 0.5 * math.sin(half) ** 2


@dataclass(frozen=True, eq=False)
class GainLedger:
    """Per-photon gain bookkeeping for a Trojan-horse run.

    Every row carries the basis pair and the phase shift that produced its
    gain, so the ledger can be re-derived entry by entry.
    """

    per_photon_gain: np.ndarray
    eve_bases: np.ndarray
    alice_bases: np.ndarray
    phase_shifts: np.ndarray

    def __post_init__(self) -> None:
        g = np.asarray(self.per_photon_gain, dtype=float)
        eb = np.asarray(self.eve_bases, dtype=np.int8)
        ab = np.asarray(self.alice_bases, dtype=np.int8)
        ph = np.asarray(self.phase_shifts, dtype=float)
        if not (g.shape == eb.shape == ab.shape == ph.shape) or g.ndim != 1:
            raise ValueError("ledger columns must be 1-d arrays of equal length")
        for arr in (g, eb, ab, ph):
            arr.setflags(write=False)
        object.__setattr__(self, "per_photon_gain", g)
        object.__setattr__(self, "eve_bases", eb)
        object.__setattr__(self, "alice_bases", ab)
        object.__setattr__(self, "phase_shifts", ph)

    @property
    def n_photons(self) -> int:
        return self.per_photon_gain.size

    @property
    def cumulative_gain(self) -> float:
        return float(self.per_photon_gain.sum())

    def cumulative_series(self) -> np.ndarray:
        return np.cumsum(self.per_photon_gain)

    def recompute_gain(self, index: int) -> float:
        return photon_gain_increment(
            int(self.eve_bases[index]),
            int(self.alice_bases[index]),
            float(self.phase_shifts[index]),
        )


def trojan_gain_experiment(
    n_photons: int,
    policy: TrojanPolicy,
    rng: np.random.Generator,
) -> GainLedger:
    """Accumulate an eavesdropper's expected gain over probed photons.

    The sender draws each photon's state uniformly from {|0>, |1>, |+>, |->}
    and applies the policy's phase to diagonal states only; the prober
    guesses a basis uniformly.  Gains follow :func:`photon_gain_increment`.
    """
    if n_photons <= 0:
        raise ValueError("need at least one photon")
    states = rng.integers(0, 4, size=n_photons)
    alice = np.where(states < 2, BASIS_RECT, BASIS_DIAG).astype(np.int8)
    shifts = np.zeros(n_photons, dtype=float)
    diag = alice == BASIS_DIAG
    if policy.variant is TrojanVariant.FIXED_SHIFT:
        shifts[diag] = policy.shift
    elif policy.variant is TrojanVariant.RANDOM_SHIFT:
        shifts[diag] = rng.random(int(diag.sum())) * (2.0 * math.pi)
    eve = np.where(rng.integers(0, 2, size=n_photons) == 0, BASIS_RECT, BASIS_DIAG).astype(np.int8)

    gains = np.full(n_photons, 0.5)
    correct = eve == alice
    gains[correct & (alice == BASIS_RECT)] = 1.0
    diag_correct = correct & diag
    half = 0.5 * shifts[diag_correct]
    shifted_value = 0.5 * np.cos(half) ** 2 + 0.5 * np.sin(half) ** 2
    gains[diag_correct] = np.where(shifts[diag_correct] == 0.0, 1.0, shifted_value)
    return GainLedger(
        per_photon_gain=gains,
        eve_bases=eve,
        alice_bases=alice,
        phase_shifts=shifts,
    )


# ---------------------------------------------------------------------------
# Entangling probe
# ---------------------------------------------------------------------------

def probe_infiltrate(pair: PureState) -> PureState:
    """Attach a probe qubit to an entangled pair.

    The probe starts in |0> and is CNOT-entangled with the receiver's qubit
    (control = qubit 1, target = the new qubit 2), so rectilinear outcomes on
    the receiver and the probe agree with certainty while the pair's
    diagonal-basis correlations are destroyed.
    """
    if pair.num_qubits != 2:
        raise ValueError("infiltration expects a two-qubit pair")
    extended = pair.tensor(basis_state("0"))
    return apply_cnot(extended, control=1, target=2)


def probe_hook() -> Callable[[PureState, np.random.Generator], PureState]:
    """Pair-source hook that infiltrates every generated pair."""

    def hook(state: PureState, rng: np.random.Generator) -> PureState:
        return probe_infiltrate(state)

    return hook


# ---------------------------------------------------------------------------
# Interlock protocol
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class InterlockTranscript:
    """Record of a split-message exchange and its integrity outcome."""

    message_bits: int
    halves: tuple[tuple[str, np.ndarray], ...]
    eve_present: bool
    detected: bool

    @property
    def integrity_ok(self) -> bool:
        return not self.detected


def interlock_exchange(
    message_bits: int,
    eve_present: bool,
    rng: np.random.Generator,
) -> InterlockTranscript:
    """Run one interlock exchange of ``message_bits``-bit messages per side.

    Each message travels as two halves that are useless alone, and neither
    side releases its second half before receiving the peer's first.  A
    relay attacker must therefore commit to the sender's second half before
    seeing it; she guesses those message_bits/2 bits uniformly and is caught
    whenever the guess differs from the real half, i.e. with probability
    1 - 2^(-message_bits/2).
    """
    k = int(message_bits)
    if k < 2 or k % 2 != 0:
        raise ValueError(f"message length must be an even integer >= 2, got {k}")
    half = k // 2
    alice = rng.integers(0, 2, size=k, dtype=np.int8)
    bob = rng.integers(0, 2, size=k, dtype=np.int8)
    a1, a2 = alice[:half], alice[half:]
    b1, b2 = bob[:half], bob[half:]
    detected = False
    delivered_a2 = a2
    if eve_present:
        guess = rng.integers(0, 2, size=half, dtype=np.int8)
        detected = not np.array_equal(guess, a2)
        delivered_a2 = guess
    halves = (
        ("alice-first", a1),
        ("bob-first", b1),
        ("alice-second", delivered_a2),
        ("bob-second", b2),
    )
    return InterlockTranscript(
        message_bits=k,
        halves=halves,
        eve_present=bool(eve_present),
        detected=detected,
    )


def interlock_detection_rate(message_bits: int) -> float:
    """Analytic probability that a relay attacker is caught."""
    if message_bits < 2 or message_bits % 2 != 0:
        raise ValueError("message length must be an even integer >= 2")
    return 1.0 - 2.0 ** (-(message_bits // 2))


# ---------------------------------------------------------------------------
# Intercept-resend
# ---------------------------------------------------------------------------

def intercept_resend(
    mode: str = "random",
) -> Callable[[PureState, Basis, np.random.Generator], PureState]:
    """Build an in-flight qubit hook that measures and re-prepares each pulse.

    Modes: "random" guesses a basis uniformly (the physical attack);
    "always-correct" and "always-wrong" are oracle modes for testing that
    pin the guess relative to the sender's true basis.
    """
    if mode not in ("random", "always-correct", "always-wrong"):
        raise ValueError(f"unknown intercept-resend mode {mode!r}")

    def hook(state: PureState, sender_basis: Basis, rng: np.random.Generator) -> PureState:
        if mode == "random":
            guess = Basis.RECTILINEAR if rng.integers(0, 2) == 0 else Basis.DIAGONAL
        elif mode == "always-correct":
            guess = sender_basis
        else:
            guess = Basis.DIAGONAL if sender_basis is Basis.RECTILINEAR else Basis.RECTILINEAR
        outcome: MeasurementOutcome = measure_qubit(state, 0, guess, rng)
        return encoded_qubit(outcome.bit, guess)

    return hook


# ---------------------------------------------------------------------------
# Bit-flip code under iid and adversarial noise
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BitFlipCodeWord:
    """Three physical bits encoding one logical bit (valid words 000/111)."""

    bits: tuple[int, int, int]

    def __post_init__(self) -> None:
        if len(self.bits) != 3 or any(b not in (0, 1) for b in self.bits):
            raise ValueError("codeword must be three 0/1 bits")

    @property
    def is_valid(self) -> bool:
        return self.bits in ((0, 0, 0), (1, 1, 1))

    def decode(self) -> int:
        """Majority vote."""
        return 1 if sum(self.bits) >= 2 else 0

    def flip(self, positions: Sequence[int]) -> "BitFlipCodeWord":
        bits = list(self.bits)
        for p in positions:
            bits[p] ^= 1
        return BitFlipCodeWord(tuple(bits))


def encode_bitflip(logical: int) -> BitFlipCodeWord:
    if logical not in (0, 1):
        raise ValueError("logical bit must be 0 or 1")
    return BitFlipCodeWord((logical,) * 3)


def iid_logical_error_rate(p: float) -> float:
    """Analytic majority-vote failure rate under iid flips: 3p^2 - 2p^3."""
    return 3.0 * p * p - 2.0 * p**3


@dataclass(frozen=True)
class QecResult:
    """Outcome of a repetition-code run, with both break-even readings
    surfaced (neither is chosen as a verdict here)."""

    mode: str
    flip_probability: float
    n_blocks: int
    logical_errors: int
    logical_error_rate: float
    iid_analytic_rate: float
    majority_crossover_probability: float = 0.5
    correctable_qubit_fraction: float = 1.0 / 3.0


def qec_bitflip_experiment(
    n_blocks: int,
    flip_probability: float,
    mode: str = "iid",
    rng: np.random.Generator | None = None,
) -> QecResult:
    """Encode, corrupt, majority-decode, and count logical errors.

    Modes: "iid" flips each physical bit independently with probability p;
    "burst-2" flips one randomly chosen adjacent pair with probability p,
    which defeats the code exactly when it fires (logical rate p).
    """
    if rng is None:
        raise ValueError("an explicit rng is required")
    if n_blocks <= 0:
        raise ValueError("need at least one block")
    p = float(flip_probability)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"flip probability must lie in [0, 1], got {p}")
    if mode not in ("iid", "burst-2"):
        raise ValueError(f"unknown noise mode {mode!r}")

    logical = rng.integers(0, 2, size=n_blocks, dtype=np.int8)
    words = np.repeat(logical[:, None], 3, axis=1)
    if mode == "iid":
        flips = rng.random((n_blocks, 3)) < p
    else:
        fires = rng.random(n_blocks) < p
        first = rng.integers(0, 2, size=n_blocks)  # adjacent pair (0,1) or (1,2)
        flips = np.zeros((n_blocks, 3), dtype=bool)
        rows = np.nonzero(fires)[0]
        flips[rows, first[rows]] = True
        flips[rows, first[rows] + 1] = True
    corrupted = words ^ flips
    decoded = (corrupted.sum(axis=1) >= 2).astype(np.int8)
    errors = int(np.count_nonzero(decoded != logical))
    return QecResult(
        mode=mode,
        flip_probability=p,
        n_blocks=int(n_blocks),
        logical_errors=errors,
        logical_error_rate=errors / n_blocks,
        iid_analytic_rate=iid_logical_error_rate(p),
    )
