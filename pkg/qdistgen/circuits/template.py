"""
Parameterized circuit templates.

A CircuitTemplate is an immutable, ordered gate list whose rotation angles are
either fixed or read from a parameter vector through slots. Evaluating a
template prepares |0...0>, applies the gates in order and returns the
computational-basis probabilities.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from qdistgen.errors import ConfigError, TemplateError
from qdistgen.statevector import (
    GateKind,
    GateOp,
    ProbDist,
    Statevector,
    apply_gate,
    full_unitary,
    init_zero_state,
    probabilities,
)

logger = logging.getLogger(__name__)

# Parameter vectors are float64 arrays of length n_params, in radians.
ParamVector = np.ndarray


class Family(str, Enum):
    """Architectural family of an ansatz."""

    P = "P"
    PE = "PE"
    PEP = "PEP"
    HZ = "HZ"
    UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class CircuitTemplate:
    """
    An ansatz: ordered gates with parameter slots.

    Args:
        id: Identifier (catalog number as a string, or a user-chosen name)
        n_qubits: Register size
        ops: Ordered gate operations
        family: Architectural family; classified from ``ops`` when omitted
        description: Free-form note carried into serialized documents
    """

    id: str
    n_qubits: int
    ops: Tuple[GateOp, ...]
    family: Optional[Family] = None
    description: str = ""
    n_params: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "id", str(self.id))
        object.__setattr__(self, "ops", tuple(self.ops))

        if not isinstance(self.n_qubits, (int, np.integer)) or self.n_qubits < 1:
            raise TemplateError(
                f"n_qubits must be a positive integer, got {self.n_qubits!r}",
                context="n_qubits",
            )

        for i, op in enumerate(self.ops):
            if op.target >= self.n_qubits:
                raise TemplateError(
                    f"qubit {op.target} out of range for {self.n_qubits} qubits",
                    context=f"ops[{i}].target",
                )
            if op.control is not None and op.control >= self.n_qubits:
                raise TemplateError(
                    f"qubit {op.control} out of range for {self.n_qubits} qubits",
                    context=f"ops[{i}].control",
                )

        slots = sorted({op.slot for op in self.ops if op.slot is not None})
        if slots != list(range(len(slots))):
            raise TemplateError(
                f"non-contiguous parameter slots {slots}", context="ops"
            )
        object.__setattr__(self, "n_params", len(slots))

        structural = classify_family(self)
        if self.family is None:
            object.__setattr__(self, "family", structural)
            return
        try:
            declared = Family(self.family)
        except ValueError:
            raise TemplateError(f"unknown family {self.family!r}", context="family")
        if declared is not structural:
            raise TemplateError(
                f"declared family {declared.value} does not match the "
                f"gate structure ({structural.value})",
                context="family",
            )
        object.__setattr__(self, "family", declared)

    def slot_occurrences(self) -> Dict[int, List[int]]:
        """Map each parameter slot to the indices of the ops bound to it."""
        occurrences: Dict[int, List[int]] = {j: [] for j in range(self.n_params)}
        for i, op in enumerate(self.ops):
            if op.slot is not None:
                occurrences[op.slot].append(i)
        return occurrences

    def bind(self, params: Sequence[float]) -> Iterator[Tuple[GateOp, Optional[float]]]:
        """Yield (op, bound angle) pairs; the angle is None for unslotted ops."""
        values = check_params(self, params)
        for op in self.ops:
            slot = op.slot
            yield op, (float(values[slot]) if slot is not None else None)

    def summary(self) -> str:
        counts: Dict[str, int] = {}
        for op in self.ops:
            counts[op.kind.value] = counts.get(op.kind.value, 0) + 1
        gates = ", ".join(f"{k}x{v}" for k, v in sorted(counts.items()))
        return (
            f"circuit {self.id}: {self.n_qubits} qubits, {self.n_params} params, "
            f"family {self.family.value} [{gates}]"
        )


def check_params(template: CircuitTemplate, params: Sequence[float]) -> ParamVector:
    """
    Validate a parameter vector against a template.

    Raises:
        ConfigError: On length mismatch or non-finite entries
    """
    values = np.asarray(params, dtype=np.float64).reshape(-1)
    if values.shape[0] != template.n_params:
        raise ConfigError(
            f"circuit {template.id} takes {template.n_params} parameters, "
            f"got {values.shape[0]}"
        )
    if not np.all(np.isfinite(values)):
        raise ConfigError(f"circuit {template.id}: parameters must be finite")
    return values


def simulate(template: CircuitTemplate, params: Sequence[float]) -> Statevector:
    """Run the template from |0...0> and return the final state."""
    state = init_zero_state(template.n_qubits)
    for op, angle in template.bind(params):
        state = apply_gate(state, op, angle)
    return state


def evaluate(template: CircuitTemplate, params: Sequence[float]) -> ProbDist:
    """
    Output distribution of a template at the given parameters.

    Args:
        template: The ansatz
        params: One angle per parameter slot, in radians

    Returns:
        Outcome probabilities in lexicographic order
    """
    return probabilities(simulate(template, params))


def template_unitary(template: CircuitTemplate, params: Sequence[float]) -> np.ndarray:
    """Explicit 2^n x 2^n unitary of the whole template (reference path)."""
    dim = 1 << template.n_qubits
    unitary = np.eye(dim, dtype=np.complex128)
    for op, angle in template.bind(params):
        unitary = full_unitary(op, template.n_qubits, angle) @ unitary
    return unitary


def _leading_hadamard_wall(template: CircuitTemplate) -> int:
    """Length of the leading H-on-every-qubit prefix, or 0 if there is none."""
    seen = set()
    for i, op in enumerate(template.ops):
        if op.kind is not GateKind.H or op.target in seen:
            break
        seen.add(op.target)
        if len(seen) == template.n_qubits:
            return i + 1
    return 0


def classify_family(template: CircuitTemplate) -> Family:
    """
    Assign an architectural family from the gate structure.

    HZ: the circuit opens with a Hadamard on every qubit.
    Otherwise the ops are split into maximal runs of rotations (P) and
    entangling gates (E); the run pattern P, PE or PEP gives the family.
    Anything else, including stray Hadamards, is unclassified.

    Args:
        template: The ansatz to classify

    Returns:
        The family tag (never raises for structurally odd circuits)
    """
    if _leading_hadamard_wall(template):
        return Family.HZ

    pattern = ""
    for op in template.ops:
        if op.kind is GateKind.H:
            return Family.UNCLASSIFIED
        block = "E" if op.kind.is_two_qubit else "P"
        if not pattern.endswith(block):
            pattern += block

    return {"P": Family.P, "PE": Family.PE, "PEP": Family.PEP}.get(
        pattern, Family.UNCLASSIFIED
    )


def terminal_rz_slots(template: CircuitTemplate) -> List[int]:
    """
    Slots that cannot influence the output probabilities.

    A slot qualifies when every gate bound to it is an RZ that is followed on
    its qubit only by operations commuting with Z there: further RZ, CZ, or a
    CNOT using that qubit as control.

    Args:
        template: The ansatz to inspect

    Returns:
        Sorted slot indices
    """
    inert = []
    for slot, indices in template.slot_occurrences().items():
        if all(_rz_is_terminal(template, i) for i in indices):
            inert.append(slot)
    return inert


def _rz_is_terminal(template: CircuitTemplate, index: int) -> bool:
    op = template.ops[index]
    if op.kind is not GateKind.RZ:
        return False
    qubit = op.target
    for later in template.ops[index + 1:]:
        if qubit not in later.qubits:
            continue
        if later.kind.is_diagonal:
            continue
        if later.kind is GateKind.CNOT and later.control == qubit:
            continue
        return False
    return True
