"""
Statevector package for qdistgen.

This package provides exact dense simulation of small qubit registers.
"""

from qdistgen.statevector.gates import (
    AngleSource,
    FixedAngle,
    GateKind,
    GateOp,
    ParamSlot,
    full_unitary,
    gate_matrix,
)
from qdistgen.statevector.simulator import (
    ProbDist,
    Statevector,
    apply_gate,
    as_prob_dist,
    init_zero_state,
    probabilities,
)

__all__ = [
    "AngleSource",
    "FixedAngle",
    "GateKind",
    "GateOp",
    "ParamSlot",
    "ProbDist",
    "Statevector",
    "apply_gate",
    "as_prob_dist",
    "full_unitary",
    "gate_matrix",
    "init_zero_state",
    "probabilities",
]
