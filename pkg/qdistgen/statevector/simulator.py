"""
Dense statevector simulator.

Amplitudes are stored as a flat complex128 array of length 2^n in
lexicographic order with qubit 0 as the most significant bit of the basis
index. Gates are applied by reshaping the vector into an n-axis tensor and
contracting the gate over the axes of the qubits it acts on.
"""

import logging
from typing import Optional, Sequence

import numpy as np

from qdistgen.config import INGEST_TOLERANCE, MAX_QUBITS
from qdistgen.errors import ConfigError, GateError, ResourceLimitError
from qdistgen.statevector.gates import DTYPE, FixedAngle, GateOp, ParamSlot, gate_matrix

logger = logging.getLogger(__name__)

# Model outputs and targets are plain float64 arrays of length 2^n.
ProbDist = np.ndarray


class Statevector:
    """
    Pure state of an n-qubit register.

    Attributes:
        n_qubits (int): Number of qubits.
        amplitudes (np.ndarray): Complex amplitudes, length 2^n_qubits.
    """

    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, amplitudes: Sequence[complex], n_qubits: Optional[int] = None):
        amps = np.asarray(amplitudes, dtype=DTYPE).reshape(-1)
        dim = amps.shape[0]
        inferred = dim.bit_length() - 1
        if dim < 2 or (1 << inferred) != dim:
            raise ConfigError(f"Amplitude count {dim} is not a power of two >= 2")
        if n_qubits is not None and n_qubits != inferred:
            raise ConfigError(
                f"{dim} amplitudes do not describe a {n_qubits}-qubit register"
            )
        self.n_qubits = inferred
        self.amplitudes = amps

    def __len__(self) -> int:
        return self.amplitudes.shape[0]

    def __repr__(self) -> str:
        return f"Statevector(n_qubits={self.n_qubits}, norm={self.norm():.15f})"

    def copy(self) -> "Statevector":
        return Statevector(self.amplitudes.copy(), self.n_qubits)

    def norm(self) -> float:
        """Squared norm, i.e. total probability."""
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def probabilities(self) -> ProbDist:
        return probabilities(self)


def init_zero_state(n_qubits: int, max_qubits: int = MAX_QUBITS) -> Statevector:
    """
    Create |00...0> on ``n_qubits`` qubits.

    Args:
        n_qubits: Register size, 1 <= n_qubits <= max_qubits
        max_qubits: Resource cap (defaults to config.MAX_QUBITS)

    Returns:
        The all-zeros basis state

    Raises:
        ResourceLimitError: If n_qubits is outside [1, max_qubits]
    """
    if not isinstance(n_qubits, (int, np.integer)) or n_qubits < 1:
        raise ResourceLimitError(f"n_qubits must be a positive integer, got {n_qubits!r}")
    if n_qubits > max_qubits:
        raise ResourceLimitError(
            f"{n_qubits} qubits exceeds the configured cap of {max_qubits}"
        )
    amps = np.zeros(1 << int(n_qubits), dtype=DTYPE)
    amps[0] = 1.0
    return Statevector(amps, int(n_qubits))


def _apply_matrix(
    amps: np.ndarray, matrix: np.ndarray, qubits: Sequence[int], n_qubits: int
) -> np.ndarray:
    k = len(qubits)
    psi = amps.reshape((2,) * n_qubits)
    gate = matrix.reshape((2,) * (2 * k))
    # Contract the gate's input axes with the register axes of ``qubits``;
    # the gate's output axes land in front and are moved back into place.
    psi = np.tensordot(gate, psi, axes=(list(range(k, 2 * k)), list(qubits)))
    psi = np.moveaxis(psi, list(range(k)), list(qubits))
    return np.ascontiguousarray(psi).reshape(-1)


def apply_gate(
    state: Statevector, op: GateOp, angle: Optional[float] = None
) -> Statevector:
    """
    Apply one gate and return the resulting state.

    The input state is not modified.

    Args:
        state: The register state
        op: The gate to apply
        angle: Rotation angle in radians; required iff ``op`` carries a
            ParamSlot, and rejected otherwise

    Returns:
        A new Statevector

    Raises:
        GateError: On out-of-range qubits or a missing/superfluous angle
    """
    n = state.n_qubits
    for q in op.qubits:
        if q >= n:
            raise GateError(
                f"{op.kind.value} acts on qubit {q} of a {n}-qubit register"
            )

    if isinstance(op.angle_source, ParamSlot):
        if angle is None:
            raise GateError(
                f"{op.kind.value} on qubit {op.target} needs a value for slot "
                f"{op.angle_source.index}"
            )
    elif angle is not None:
        raise GateError(f"{op.kind.value} on qubit {op.target} takes no bound angle")
    elif isinstance(op.angle_source, FixedAngle):
        angle = op.angle_source.radians

    matrix = gate_matrix(op.kind, angle)
    return Statevector(_apply_matrix(state.amplitudes, matrix, op.qubits, n), n)


def probabilities(state: Statevector) -> ProbDist:
    """
    Computational-basis outcome probabilities |<x|psi>|^2.

    Args:
        state: A normalized state

    Returns:
        A float64 array indexed by basis state in lexicographic order
    """
    amps = state.amplitudes
    return amps.real * amps.real + amps.imag * amps.imag


def as_prob_dist(
    values: Sequence[float],
    n_outcomes: Optional[int] = None,
    tol: float = INGEST_TOLERANCE,
) -> ProbDist:
    """
    Validate and convert user-supplied probabilities.

    Args:
        values: Candidate probabilities
        n_outcomes: Expected length, if known
        tol: Allowed deviation of the sum from one

    Returns:
        The values as a float64 array

    Raises:
        ConfigError: On wrong length, negative or non-finite entries, or a
            sum outside 1 +- tol
    """
    dist = np.asarray(values, dtype=np.float64).reshape(-1)
    if n_outcomes is not None and dist.shape[0] != n_outcomes:
        raise ConfigError(
            f"Distribution has {dist.shape[0]} outcomes, expected {n_outcomes}"
        )
    if not np.all(np.isfinite(dist)):
        raise ConfigError("Distribution contains non-finite entries")
    if np.any(dist < 0):
        raise ConfigError("Distribution contains negative entries")
    total = float(dist.sum())
    if abs(total - 1.0) > tol:
        raise ConfigError(f"Distribution sums to {total!r}, not 1")
    return dist
