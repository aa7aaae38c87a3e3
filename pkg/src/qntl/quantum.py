"""Exact state-vector engine for small qubit registers.

States are dense complex amplitude vectors over one to four qubits.  Qubit 0
is the leftmost position in a basis label, i.e. the most significant bit of
the amplitude index: for a two-qubit register, index 2 = 0b10 is |10> with
qubit 0 equal to 1.  Operations are pure; every one returns a fresh state and
never mutates its input, so states can be shared freely across threads.

Global phase is physically meaningless but is not normalized away; use
:func:`equal_up_to_global_phase` to compare states.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "MAX_QUBITS",
    "NORM_TOL",
    "CHSH_OPTIMAL_ANGLES",
    "Basis",
    "BellVariant",
    "PureState",
    "MeasurementOutcome",
    "pure_state",
    "basis_state",
    "encoded_qubit",
    "bell_pair",
    "measure_qubit",
    "measure_rotated",
    "apply_cnot",
    "apply_phase",
    "correlation",
    "chsh_value",
    "equal_up_to_global_phase",
]

MAX_QUBITS = 4
NORM_TOL = 1e-9

# Analyzer angles (a, a', b, b') that maximize the CHSH combination on a
# phi+ pair: S = |E(a,b) - E(a,b') + E(a',b) + E(a',b')| = 2*sqrt(2).
CHSH_OPTIMAL_ANGLES: tuple[float, float, float, float] = (
    0.0,
    math.pi / 4,
    math.pi / 8,
    3 * math.pi / 8,
)


class Basis(Enum):
    """Measurement basis for a single qubit."""

    RECTILINEAR = "rectilinear"
    DIAGONAL = "diagonal"

    @property
    def analyzer_angle(self) -> float:
        """Rotation angle whose eigenvectors realize this basis."""
        return 0.0 if self is Basis.RECTILINEAR else math.pi / 4


class BellVariant(Enum):
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized pure state of ``num_qubits`` qubits.

    The amplitude array has length 2**num_qubits, squared magnitudes summing
    to 1 within ``NORM_TOL``, and is frozen read-only on construction.
    """

    amplitudes: np.ndarray
    num_qubits: int

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=np.complex128, copy=True)
        if amps.ndim != 1:
            raise ValueError("amplitudes must be a 1-d vector")
        n = int(self.num_qubits)
        if not 1 <= n <= MAX_QUBITS:
            raise ValueError(f"register size must be 1..{MAX_QUBITS}, got {n}")
        if amps.size != 2**n:
            raise ValueError(
                f"amplitude vector of length {amps.size} does not match {n} qubit(s)"
            )
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm!r} deviates from 1 beyond {NORM_TOL}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "num_qubits", n)

    def probability(self, index: int) -> float:
        """Born probability of the computational basis outcome ``index``."""
        return float(abs(self.amplitudes[index]) ** 2)

    def tensor(self, other: "PureState") -> "PureState":
        """Joint state with ``other`` appended as the trailing qubits."""
        total = self.num_qubits + other.num_qubits
        if total > MAX_QUBITS:
            raise ValueError(f"combined register would exceed {MAX_QUBITS} qubits")
        return PureState(np.kron(self.amplitudes, other.amplitudes), total)


@dataclass(frozen=True)
class MeasurementOutcome:
    """Result of a single-qubit measurement: the bit and the collapsed state."""

    bit: int
    post_state: PureState


def pure_state(amplitudes: Sequence[complex]) -> PureState:
    """Build a state from raw amplitudes, inferring the register size."""
    arr = np.asarray(amplitudes, dtype=np.complex128)
    n = int(round(math.log2(arr.size))) if arr.size else 0
    if arr.size != 2**n or n < 1:
        raise ValueError(f"amplitude vector length {arr.size} is not a power of two >= 2")
    return PureState(arr, n)


def basis_state(bits: Sequence[int] | str) -> PureState:
    """Computational basis state |bits>, e.g. ``basis_state("10")`` = |10>."""
    bit_list = [int(b) for b in bits]
    if not bit_list or any(b not in (0, 1) for b in bit_list):
        raise ValueError("bits must be a non-empty sequence of 0/1")
    n = len(bit_list)
    if n > MAX_QUBITS:
        raise ValueError(f"register size must be 1..{MAX_QUBITS}, got {n}")
    index = 0
    for b in bit_list:
        index = (index << 1) | b
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[index] = 1.0
    return PureState(amps, n)


_SQRT_HALF = 1.0 / math.sqrt(2.0)

_ENCODED = {
    (0, Basis.RECTILINEAR): (1.0, 0.0),
    (1, Basis.RECTILINEAR): (0.0, 1.0),
    (0, Basis.DIAGONAL): (_SQRT_HALF, _SQRT_HALF),
    (1, Basis.DIAGONAL): (_SQRT_HALF, -_SQRT_HALF),
}


def encoded_qubit(bit: int, basis: Basis) -> PureState:
    """Single qubit carrying ``bit`` in ``basis``: |0>, |1>, |+>, or |->.

    These are the four sender states of prepare-and-measure key exchange;
    measuring in the preparation basis recovers the bit with certainty.
    """
    try:
        amps = _ENCODED[(int(bit), basis)]
    except KeyError:
        raise ValueError(f"bit must be 0 or 1, got {bit!r}") from None
    return PureState(np.array(amps, dtype=np.complex128), 1)


_BELL_AMPLITUDES = {
    BellVariant.PHI_PLUS: (_SQRT_HALF, 0.0, 0.0, _SQRT_HALF),
    BellVariant.PHI_MINUS: (_SQRT_HALF, 0.0, 0.0, -_SQRT_HALF),
    BellVariant.PSI_PLUS: (0.0, _SQRT_HALF, _SQRT_HALF, 0.0),
    BellVariant.PSI_MINUS: (0.0, _SQRT_HALF, -_SQRT_HALF, 0.0),
}


def bell_pair(variant: BellVariant | str = BellVariant.PHI_PLUS) -> PureState:
    """Maximally entangled two-qubit pair of the requested variant."""
    if isinstance(variant, str):
        try:
            variant = BellVariant(variant.lower())
        except ValueError:
            names = ", ".join(v.value for v in BellVariant)
            raise ValueError(f"unknown pair variant {variant!r}; expected one of {names}") from None
    return PureState(np.array(_BELL_AMPLITUDES[variant], dtype=np.complex128), 2)


def _check_qubit(state: PureState, qubit_index: int) -> int:
    qubit_index = int(qubit_index)
    if not 0 <= qubit_index < state.num_qubits:
        raise IndexError(
            f"qubit index {qubit_index} out of range for {state.num_qubits} qubit(s)"
        )
    return qubit_index


def measure_rotated(
    state: PureState,
    qubit_index: int,
    angle: float,
    rng: np.random.Generator,
) -> MeasurementOutcome:
    """Projective measurement of one qubit along a rotated axis.

    The outcome-0 eigenvector is cos(angle)|0> + sin(angle)|1>; angle 0 is the
    rectilinear basis and pi/4 the diagonal one.  The returned post-state is
    the renormalized projection, so repeating the same measurement reproduces
    the same bit with certainty.  One uniform variate is consumed per call,
    making results deterministic for a fixed generator state.
    """
    q = _check_qubit(state, qubit_index)
    n = state.num_qubits
    t = state.amplitudes.reshape([2] * n)
    a0 = np.take(t, 0, axis=q)
    a1 = np.take(t, 1, axis=q)
    c, s = math.cos(angle), math.sin(angle)
    comp0 = c * a0 + s * a1
    comp1 = -s * a0 + c * a1
    p0 = float(np.sum(np.abs(comp0) ** 2))
    p1 = float(np.sum(np.abs(comp1) ** 2))
    bit = 0 if rng.random() < p0 else 1
    if p1 == 0.0:  # guard the float gap between p0 and 1
        bit = 0
    elif p0 == 0.0:
        bit = 1
    if bit == 0:
        scale = 1.0 / math.sqrt(p0)
        new0, new1 = c * comp0 * scale, s * comp0 * scale
    else:
        scale = 1.0 / math.sqrt(p1)
        new0, new1 = -s * comp1 * scale, c * comp1 * scale
    post = np.stack([new0, new1], axis=q).reshape(2**n)
    post = post / math.sqrt(float(np.sum(np.abs(post) ** 2)))
    return MeasurementOutcome(bit=bit, post_state=PureState(post, n))


def measure_qubit(
    state: PureState,
    qubit_index: int,
    basis: Basis,
    rng: np.random.Generator,
) -> MeasurementOutcome:
    """Measure one qubit in the rectilinear or diagonal basis.

    Bit 0 maps to |0> (rectilinear) or |+> (diagonal).
    """
    return measure_rotated(state, qubit_index, basis.analyzer_angle, rng)


def apply_cnot(state: PureState, control: int, target: int) -> PureState:
    """Controlled-NOT: flips ``target`` wherever ``control`` is 1."""
    c = _check_qubit(state, control)
    t = _check_qubit(state, target)
    if c == t:
        raise ValueError("control and target must be distinct qubits")
    n = state.num_qubits
    idx = np.arange(2**n)
    c_bit = (idx >> (n - 1 - c)) & 1
    source = np.where(c_bit == 1, idx ^ (1 << (n - 1 - t)), idx)
    return PureState(state.amplitudes[source], n)


def apply_phase(state: PureState, qubit_index: int, theta: float) -> PureState:
    """Phase gate: multiplies the qubit's |1> amplitudes by exp(i*theta).

    Rectilinear measurement probabilities are unchanged by construction; only
    superposition (diagonal-basis) statistics feel the phase.
    """
    q = _check_qubit(state, qubit_index)
    n = state.num_qubits
    idx = np.arange(2**n)
    mask = ((idx >> (n - 1 - q)) & 1) == 1
    amps = state.amplitudes.copy()
    amps[mask] *= cmath.exp(1j * float(theta))
    return PureState(amps, n)


def _density_matrix(state: PureState, trace_out: Iterable[int] | None) -> np.ndarray:
    """Density matrix of the kept qubits, tracing out the listed indices."""
    n = state.num_qubits
    if trace_out is None:
        traced: list[int] = []
    else:
        traced = sorted({_check_qubit(state, q) for q in trace_out})
    kept = [q for q in range(n) if q not in traced]
    if len(kept) != 2:
        raise ValueError(
            f"correlation needs exactly 2 remaining qubits, got {len(kept)}"
        )
    t = state.amplitudes.reshape([2] * n)
    # rho[kept, kept'] = sum over traced axes of psi * conj(psi)
    ket = list(range(n))
    bra = [q if q in traced else q + n for q in range(n)]
    out = [q for q in kept] + [q + n for q in kept]
    rho = np.einsum(t, ket, t.conj(), bra, out)
    return rho.reshape(4, 4)


def _analyzer(angle: float) -> np.ndarray:
    """Observable with +1 eigenvector cos(angle)|0> + sin(angle)|1>."""
    c2, s2 = math.cos(2 * angle), math.sin(2 * angle)
    return np.array([[c2, s2], [s2, -c2]], dtype=np.complex128)


def correlation(
    state: PureState,
    angle_a: float,
    angle_b: float,
    trace_out: Iterable[int] | None = None,
) -> float:
    """Expectation of the +/-1 outcome product at the two analyzer angles.

    The first kept qubit is measured at ``angle_a``, the second at
    ``angle_b``.  ``trace_out`` discards ancillary qubits (e.g. an
    eavesdropper's probe) before the correlator is formed.
    """
    rho = _density_matrix(state, trace_out)
    op = np.kron(_analyzer(angle_a), _analyzer(angle_b))
    return float(np.trace(rho @ op).real)


def chsh_value(
    state: PureState,
    angles: Sequence[float] = CHSH_OPTIMAL_ANGLES,
    trace_out: Iterable[int] | None = None,
) -> float:
    """Analytic CHSH combination S for the given analyzer angles.

    ``angles`` is (a, a', b, b'); the combination is
    S = |E(a,b) - E(a,b') + E(a',b) + E(a',b')|.  Any state whose two kept
    qubits are unentangled satisfies S <= 2; a phi+ pair at the optimal
    angles reaches 2*sqrt(2).
    """
    if len(angles) != 4:
        raise ValueError("angles must be (a, a_prime, b, b_prime)")
    a, ap, b, bp = (float(x) for x in angles)
    e_ab = correlation(state, a, b, trace_out)
    e_abp = correlation(state, a, bp, trace_out)
    e_apb = correlation(state, ap, b, trace_out)
    e_apbp = correlation(state, ap, bp, trace_out)
    return abs(e_ab - e_abp + e_apb + e_apbp)


def equal_up_to_global_phase(a: PureState, b: PureState, tol: float = NORM_TOL) -> bool:
    """True when the states differ only by a global phase, within ``tol``."""
    if a.num_qubits != b.num_qubits:
        return False
    inner = complex(np.vdot(a.amplitudes, b.amplitudes))
    return abs(abs(inner) - 1.0) <= tol
