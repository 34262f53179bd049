"""
Tests for circuit templates and their evaluation.
"""

import math

import numpy as np
import pytest

from qdistgen.circuits import (
    CircuitTemplate,
    Family,
    check_params,
    classify_family,
    evaluate,
    simulate,
    template_unitary,
    terminal_rz_slots,
)
from qdistgen.errors import ConfigError, TemplateError
from qdistgen.statevector import FixedAngle, GateKind, GateOp, ParamSlot


def _rot(kind, qubit, slot):
    return GateOp(kind, qubit, angle_source=ParamSlot(slot))


class TestEvaluate:
    """Tests for evaluate."""

    def test_identity_rotation(self, single_rx):
        assert np.allclose(evaluate(single_rx, [0.0]), [1.0, 0.0], atol=1e-15)

    def test_bell_template(self, bell_template):
        assert bell_template.n_params == 0
        assert np.allclose(evaluate(bell_template, []), [0.5, 0.0, 0.0, 0.5], atol=1e-15)

    def test_ry_half_pi(self, single_ry):
        assert np.allclose(evaluate(single_ry, [math.pi / 2]), [0.5, 0.5], atol=1e-15)

    def test_deterministic(self, circuit_8, rng):
        params = rng.uniform(0, 2 * math.pi, circuit_8.n_params)
        assert np.array_equal(evaluate(circuit_8, params), evaluate(circuit_8, params))

    def test_length_mismatch(self, circuit_8):
        with pytest.raises(ConfigError):
            evaluate(circuit_8, np.zeros(circuit_8.n_params + 1))

    def test_non_finite_params(self, single_rx):
        with pytest.raises(ConfigError):
            check_params(single_rx, [np.inf])

    def test_simulate_matches_unitary(self, shared_slot_template):
        params = [0.4, -1.2]
        state = simulate(shared_slot_template, params)
        column = template_unitary(shared_slot_template, params)[:, 0]
        assert np.max(np.abs(state.amplitudes - column)) <= 1e-12


class TestTemplateInvariants:
    """Tests for CircuitTemplate construction."""

    def test_non_contiguous_slots(self):
        with pytest.raises(TemplateError, match="non-contiguous parameter slots"):
            CircuitTemplate("bad", 2, (_rot(GateKind.RX, 0, 0), _rot(GateKind.RX, 1, 2)))

    def test_qubit_out_of_range(self):
        with pytest.raises(TemplateError, match=r"ops\[1\]\.target"):
            CircuitTemplate("bad", 2, (_rot(GateKind.RX, 0, 0), _rot(GateKind.RX, 2, 1)))

    def test_control_out_of_range(self):
        with pytest.raises(TemplateError, match=r"ops\[0\]\.control"):
            CircuitTemplate("bad", 2, (GateOp(GateKind.CNOT, 0, control=5),))

    def test_slot_occurrences(self, shared_slot_template):
        assert shared_slot_template.n_params == 2
        assert shared_slot_template.slot_occurrences() == {0: [0, 1], 1: [4]}

    def test_bind_angles(self, shared_slot_template):
        bound = [angle for _, angle in shared_slot_template.bind([0.1, 0.2])]
        assert bound == [0.1, 0.1, None, None, 0.2]

    def test_summary(self, bell_template):
        assert "2 qubits" in bell_template.summary()


class TestClassifyFamily:
    """Tests for classify_family."""

    def test_parameterized_only(self):
        t = CircuitTemplate("p", 2, (_rot(GateKind.RX, 0, 0), _rot(GateKind.RX, 1, 1)))
        assert classify_family(t) is Family.P

    def test_parameterized_then_entangling(self):
        t = CircuitTemplate(
            "pe", 2,
            (_rot(GateKind.RY, 0, 0), _rot(GateKind.RY, 1, 1), GateOp(GateKind.CNOT, 1, control=0)),
        )
        assert classify_family(t) is Family.PE

    def test_pep(self):
        t = CircuitTemplate(
            "pep", 2,
            (_rot(GateKind.RY, 0, 0), GateOp(GateKind.CZ, 1, control=0), _rot(GateKind.RY, 1, 1)),
        )
        assert classify_family(t) is Family.PEP

    def test_hadamard_wall(self):
        t = CircuitTemplate(
            "hz", 2,
            (
                GateOp(GateKind.H, 0), GateOp(GateKind.H, 1),
                _rot(GateKind.RZ, 0, 0), _rot(GateKind.RZ, 1, 1),
                GateOp(GateKind.CZ, 1, control=0),
            ),
        )
        assert classify_family(t) is Family.HZ

    def test_unclassified(self, bell_template):
        # H on one qubit only is not a wall
        assert classify_family(bell_template) is Family.UNCLASSIFIED
        t = CircuitTemplate(
            "epe", 2,
            (GateOp(GateKind.CNOT, 1, control=0), _rot(GateKind.RX, 0, 0),
             GateOp(GateKind.CNOT, 1, control=0)),
        )
        assert classify_family(t) is Family.UNCLASSIFIED

    def test_explicit_family_kept(self):
        t = CircuitTemplate("p", 1, (_rot(GateKind.RX, 0, 0),), family="P")
        assert t.family is Family.P

    def test_explicit_family_must_match_structure(self):
        with pytest.raises(TemplateError, match="family: declared family PEP") as info:
            CircuitTemplate("x", 1, (_rot(GateKind.RX, 0, 0),), family="PEP")
        assert info.value.context == "family"

    def test_unknown_family(self):
        with pytest.raises(TemplateError, match="unknown family"):
            CircuitTemplate("x", 1, (_rot(GateKind.RX, 0, 0),), family="XYZ")


class TestTerminalRZ:
    """Tests for terminal_rz_slots."""

    def test_trailing_rz(self):
        t = CircuitTemplate(
            "t", 2,
            (_rot(GateKind.RY, 0, 0), GateOp(GateKind.CNOT, 1, control=0),
             _rot(GateKind.RZ, 1, 1), _rot(GateKind.RZ, 0, 2)),
        )
        assert terminal_rz_slots(t) == [1, 2]

    def test_rz_before_mixing_gate(self):
        t = CircuitTemplate(
            "t", 1,
            (_rot(GateKind.RZ, 0, 0), GateOp(GateKind.RX, 0, angle_source=FixedAngle(0.5))),
        )
        assert terminal_rz_slots(t) == []

    def test_rz_on_cnot_target_is_not_terminal(self):
        t = CircuitTemplate(
            "t", 2,
            (GateOp(GateKind.H, 0), _rot(GateKind.RZ, 1, 0), GateOp(GateKind.CNOT, 1, control=0)),
        )
        assert terminal_rz_slots(t) == []

    def test_terminal_slots_do_not_change_output(self, rng):
        t = CircuitTemplate(
            "t", 2,
            (_rot(GateKind.RX, 0, 0), _rot(GateKind.RY, 1, 1), _rot(GateKind.RZ, 0, 2),
             GateOp(GateKind.CNOT, 1, control=0), _rot(GateKind.RZ, 1, 3)),
        )
        assert terminal_rz_slots(t) == [2, 3]
        params = rng.uniform(0, 2 * math.pi, 4)
        moved = params.copy()
        moved[2:] += [1.7, -2.4]
        assert np.max(np.abs(evaluate(t, params) - evaluate(t, moved))) <= 1e-12
