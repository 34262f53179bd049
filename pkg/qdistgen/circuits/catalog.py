"""
The 22-circuit ansatz catalog.

Circuits 1-11 act on four qubits, 12-18 on three and 19-22 on two. Each is
assembled from three kinds of layer:

* a parameterized layer: one rotation per qubit (two for circuits 2 and 12),
  RX for odd circuit numbers and RY for even ones;
* an entangling layer: a nearest-neighbour chain q0->q1->...->q(n-1) of CNOTs,
  or of CZs for circuits 10 and 18;
* a Hadamard wall: H on every qubit, opening the HZ circuits, which then
  carry only RZ rotations.

Every rotation gets its own parameter slot, numbered in gate order. The
layouts are a reconstruction from the family structure; any of them can be
replaced by loading a template file instead.
"""

import logging
from functools import lru_cache
from typing import Dict, List, NamedTuple, Optional, Union

from qdistgen.circuits.template import CircuitTemplate, Family
from qdistgen.errors import ConfigError
from qdistgen.statevector import GateKind, GateOp, ParamSlot

logger = logging.getLogger(__name__)

CATALOG_VERSION = "1"


class _Blueprint(NamedTuple):
    n_qubits: int
    family: Family
    rotation: GateKind
    entangler: Optional[GateKind] = None
    repeats: int = 1


_BLUEPRINTS: Dict[int, _Blueprint] = {
    # four qubits
    1: _Blueprint(4, Family.P, GateKind.RX),
    2: _Blueprint(4, Family.P, GateKind.RY, repeats=2),
    3: _Blueprint(4, Family.PE, GateKind.RX, GateKind.CNOT),
    4: _Blueprint(4, Family.PE, GateKind.RY, GateKind.CNOT),
    5: _Blueprint(4, Family.PE, GateKind.RX, GateKind.CNOT),
    6: _Blueprint(4, Family.HZ, GateKind.RZ),
    7: _Blueprint(4, Family.HZ, GateKind.RZ, GateKind.CNOT),
    8: _Blueprint(4, Family.PEP, GateKind.RY, GateKind.CNOT),
    9: _Blueprint(4, Family.PEP, GateKind.RX, GateKind.CNOT),
    10: _Blueprint(4, Family.PEP, GateKind.RY, GateKind.CZ),
    11: _Blueprint(4, Family.PEP, GateKind.RX, GateKind.CNOT),
    # three qubits
    12: _Blueprint(3, Family.P, GateKind.RY, repeats=2),
    13: _Blueprint(3, Family.PE, GateKind.RX, GateKind.CNOT),
    14: _Blueprint(3, Family.P, GateKind.RY),
    15: _Blueprint(3, Family.PE, GateKind.RX, GateKind.CNOT),
    16: _Blueprint(3, Family.HZ, GateKind.RZ),
    17: _Blueprint(3, Family.HZ, GateKind.RZ, GateKind.CNOT),
    18: _Blueprint(3, Family.PEP, GateKind.RY, GateKind.CZ),
    # two qubits
    19: _Blueprint(2, Family.P, GateKind.RX),
    20: _Blueprint(2, Family.P, GateKind.RY),
    21: _Blueprint(2, Family.PE, GateKind.RX, GateKind.CNOT),
    22: _Blueprint(2, Family.PE, GateKind.RY, GateKind.CNOT),
}

CATALOG_IDS = tuple(sorted(_BLUEPRINTS))


class _OpBuilder:
    """Accumulates ops and hands out fresh parameter slots."""

    def __init__(self, n_qubits: int):
        self.n_qubits = n_qubits
        self.ops: List[GateOp] = []
        self.next_slot = 0

    def rotation_layer(self, kind: GateKind, repeats: int = 1) -> None:
        for qubit in range(self.n_qubits):
            for _ in range(repeats):
                self.ops.append(GateOp(kind, qubit, angle_source=ParamSlot(self.next_slot)))
                self.next_slot += 1

    def entangling_chain(self, kind: GateKind) -> None:
        for qubit in range(self.n_qubits - 1):
            self.ops.append(GateOp(kind, qubit + 1, control=qubit))

    def hadamard_wall(self) -> None:
        for qubit in range(self.n_qubits):
            self.ops.append(GateOp(GateKind.H, qubit))


def _build(circuit_id: int, bp: _Blueprint) -> CircuitTemplate:
    builder = _OpBuilder(bp.n_qubits)
    if bp.family is Family.HZ:
        builder.hadamard_wall()
        builder.rotation_layer(GateKind.RZ)
        if bp.entangler is not None:
            builder.entangling_chain(bp.entangler)
    else:
        builder.rotation_layer(bp.rotation, bp.repeats)
        if bp.entangler is not None:
            builder.entangling_chain(bp.entangler)
        if bp.family is Family.PEP:
            builder.rotation_layer(bp.rotation, bp.repeats)

    return CircuitTemplate(
        id=str(circuit_id),
        n_qubits=bp.n_qubits,
        ops=tuple(builder.ops),
        family=bp.family,
        description=f"catalog v{CATALOG_VERSION} reconstruction",
    )


@lru_cache(maxsize=None)
def _cached(circuit_id: int) -> CircuitTemplate:
    return _build(circuit_id, _BLUEPRINTS[circuit_id])


def catalog_get(circuit_id: Union[int, str]) -> CircuitTemplate:
    """
    Look up a catalog circuit.

    Args:
        circuit_id: Catalog number 1..22 (int or numeric string)

    Returns:
        The template (shared, immutable)

    Raises:
        ConfigError: If the id is not in the catalog
    """
    try:
        key = int(circuit_id)
    except (TypeError, ValueError):
        raise ConfigError(f"Unknown catalog circuit: {circuit_id!r}")
    if key not in _BLUEPRINTS:
        raise ConfigError(f"Unknown catalog circuit: {circuit_id!r} (valid ids 1-22)")
    return _cached(key)


def catalog_ids(n_qubits: Optional[int] = None) -> List[int]:
    """Catalog ids, optionally restricted to one register size."""
    return [
        cid for cid in CATALOG_IDS
        if n_qubits is None or _BLUEPRINTS[cid].n_qubits == n_qubits
    ]


def catalog_all() -> List[CircuitTemplate]:
    """All catalog templates in id order."""
    return [catalog_get(cid) for cid in CATALOG_IDS]
