"""
Gate definitions for the statevector simulator.

Rotations use the half-angle convention R_P(theta) = exp(-i theta P / 2), so
their generators have eigenvalues +-1/2. Two-qubit matrices are written in the
|control, target> basis with the control as the more significant bit.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np

from qdistgen.errors import GateError

DTYPE = np.complex128

I2 = np.eye(2, dtype=DTYPE)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=DTYPE)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=DTYPE)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=DTYPE)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=DTYPE) / np.sqrt(2.0)
PROJ_0 = np.array([[1, 0], [0, 0]], dtype=DTYPE)
PROJ_1 = np.array([[0, 0], [0, 1]], dtype=DTYPE)

CNOT_MATRIX = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=DTYPE
)
CZ_MATRIX = np.diag([1, 1, 1, -1]).astype(DTYPE)


class GateKind(str, Enum):
    """Closed set of supported gates."""

    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    H = "H"
    CNOT = "CNOT"
    CZ = "CZ"

    @property
    def is_rotation(self) -> bool:
        return self in (GateKind.RX, GateKind.RY, GateKind.RZ)

    @property
    def is_two_qubit(self) -> bool:
        return self in (GateKind.CNOT, GateKind.CZ)

    @property
    def is_diagonal(self) -> bool:
        """Diagonal gates never change computational-basis probabilities."""
        return self in (GateKind.RZ, GateKind.CZ)

    @classmethod
    def parse(cls, name: str) -> "GateKind":
        try:
            return cls(str(name).upper())
        except ValueError:
            raise GateError(f"Unknown gate kind: {name!r}")


@dataclass(frozen=True)
class FixedAngle:
    """A rotation angle baked into the template, in radians."""

    radians: float


@dataclass(frozen=True)
class ParamSlot:
    """A rotation angle read from the parameter vector at ``index``."""

    index: int


AngleSource = Union[FixedAngle, ParamSlot]


@dataclass(frozen=True)
class GateOp:
    """
    One gate application inside a circuit.

    Args:
        kind: The gate kind
        target: Target qubit index
        control: Control qubit index, present iff the gate is CNOT or CZ
        angle_source: FixedAngle or ParamSlot, present iff the gate is a rotation
    """

    kind: GateKind
    target: int
    control: Optional[int] = None
    angle_source: Optional[AngleSource] = None

    def __post_init__(self):
        if not isinstance(self.kind, GateKind):
            object.__setattr__(self, "kind", GateKind.parse(self.kind))

        if self.target < 0:
            raise GateError(f"{self.kind.value}: negative target qubit {self.target}")

        if self.kind.is_two_qubit:
            if self.control is None:
                raise GateError(f"{self.kind.value} requires a control qubit")
            if self.control < 0:
                raise GateError(
                    f"{self.kind.value}: negative control qubit {self.control}"
                )
            if self.control == self.target:
                raise GateError(
                    f"{self.kind.value}: control and target are both qubit {self.target}"
                )
        elif self.control is not None:
            raise GateError(f"{self.kind.value} does not take a control qubit")

        if self.kind.is_rotation:
            if self.angle_source is None:
                raise GateError(f"{self.kind.value} requires an angle or a parameter slot")
            if isinstance(self.angle_source, ParamSlot) and self.angle_source.index < 0:
                raise GateError(f"negative parameter slot {self.angle_source.index}")
        elif self.angle_source is not None:
            raise GateError(f"{self.kind.value} does not take an angle")

    @property
    def slot(self) -> Optional[int]:
        """Parameter slot index, or None for unparameterized gates."""
        if isinstance(self.angle_source, ParamSlot):
            return self.angle_source.index
        return None

    @property
    def qubits(self) -> tuple:
        """Qubits acted on, control first for two-qubit gates."""
        if self.control is not None:
            return (self.control, self.target)
        return (self.target,)


def rx(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=DTYPE)


def ry(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=DTYPE)


def rz(theta: float) -> np.ndarray:
    return np.array(
        [[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]], dtype=DTYPE
    )


_ROTATIONS = {GateKind.RX: rx, GateKind.RY: ry, GateKind.RZ: rz}
_FIXED = {GateKind.H: HADAMARD, GateKind.CNOT: CNOT_MATRIX, GateKind.CZ: CZ_MATRIX}


def gate_matrix(kind: GateKind, angle: Optional[float] = None) -> np.ndarray:
    """
    Return the local matrix of a gate (2x2, or 4x4 for two-qubit gates).

    Args:
        kind: The gate kind
        angle: Rotation angle in radians, required for RX/RY/RZ

    Returns:
        The gate matrix as complex128
    """
    if kind.is_rotation:
        if angle is None:
            raise GateError(f"{kind.value} requires an angle")
        return _ROTATIONS[kind](float(angle))
    return _FIXED[kind]


def _kron_all(factors) -> np.ndarray:
    out = np.ones((1, 1), dtype=DTYPE)
    for factor in factors:
        out = np.kron(out, factor)
    return out


def full_unitary(op: GateOp, n_qubits: int, angle: Optional[float] = None) -> np.ndarray:
    """
    Build the explicit 2^n x 2^n operator of a gate by Kronecker products.

    This is the slow reference used to cross-check the tensor kernel; qubit 0
    is the leftmost Kronecker factor (most significant bit).

    Args:
        op: The gate operation
        n_qubits: Number of qubits of the register
        angle: Rotation angle when the op carries a parameter slot

    Returns:
        The full unitary matrix
    """
    if isinstance(op.angle_source, FixedAngle):
        angle = op.angle_source.radians

    if not op.kind.is_two_qubit:
        factors = [I2] * n_qubits
        factors[op.target] = gate_matrix(op.kind, angle)
        return _kron_all(factors)

    # Controlled gates: |0><0|_c (x) I + |1><1|_c (x) G_t
    local = PAULI_X if op.kind is GateKind.CNOT else PAULI_Z
    idle = [I2] * n_qubits
    idle[op.control] = PROJ_0
    active = [I2] * n_qubits
    active[op.control] = PROJ_1
    active[op.target] = local
    return _kron_all(idle) + _kron_all(active)
