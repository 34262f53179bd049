"""
Pytest configuration file for qdistgen.

This file contains fixtures and configuration for pytest.
"""

import os
import shutil
import sys
import tempfile

import numpy as np
import pytest

# Add the project root directory to the Python path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

# Import project modules
from qdistgen.circuits import CircuitTemplate, catalog_get
from qdistgen.optimizer import TrainConfig
from qdistgen.statevector import FixedAngle, GateKind, GateOp, ParamSlot


# Basic fixtures
@pytest.fixture
def rng():
    """Return a seeded random generator for reproducible test inputs."""
    return np.random.default_rng(20240501)


@pytest.fixture
def temp_test_dir():
    """Create a temporary directory for test data."""
    temp_dir = tempfile.mkdtemp()
    yield temp_dir
    shutil.rmtree(temp_dir)


# Template fixtures
@pytest.fixture
def single_rx():
    """One qubit, one RX slot."""
    return CircuitTemplate("rx", 1, (GateOp(GateKind.RX, 0, angle_source=ParamSlot(0)),))


@pytest.fixture
def single_ry():
    """One qubit, one RY slot."""
    return CircuitTemplate("ry", 1, (GateOp(GateKind.RY, 0, angle_source=ParamSlot(0)),))


@pytest.fixture
def single_rz():
    """One qubit, one RZ slot."""
    return CircuitTemplate("rz", 1, (GateOp(GateKind.RZ, 0, angle_source=ParamSlot(0)),))


@pytest.fixture
def bell_template():
    """H on qubit 0 followed by CNOT(0 -> 1); no parameters."""
    return CircuitTemplate(
        "bell", 2, (GateOp(GateKind.H, 0), GateOp(GateKind.CNOT, 1, control=0))
    )


@pytest.fixture
def shared_slot_template():
    """Two qubits whose RY rotations share slot 0, plus an entangler and a fixed angle."""
    return CircuitTemplate(
        "shared",
        2,
        (
            GateOp(GateKind.RY, 0, angle_source=ParamSlot(0)),
            GateOp(GateKind.RY, 1, angle_source=ParamSlot(0)),
            GateOp(GateKind.CNOT, 1, control=0),
            GateOp(GateKind.RX, 0, angle_source=FixedAngle(0.3)),
            GateOp(GateKind.RX, 1, angle_source=ParamSlot(1)),
        ),
    )


@pytest.fixture
def circuit_8():
    """The four-qubit PEP catalog circuit."""
    return catalog_get(8)


# Training fixtures
@pytest.fixture
def quick_train_config():
    """A short training run for harness tests."""
    return TrainConfig(stepsize=0.1, iterations=20, log_every=0)


@pytest.fixture
def quick_experiment_dict(temp_test_dir):
    """A nested config describing a tiny two-qubit sweep."""
    return {
        "training": {"iterations": 15, "stepsize": 0.1},
        "experiment": {
            "circuits": [19, 22],
            "targets": ["uniform", "binomial"],
            "seeds": [0, 1],
            "workers": 1,
            "output_dir": os.path.join(temp_test_dir, "results"),
        },
    }


@pytest.fixture
def catalog_ids_by_qubits():
    """Catalog circuit ids grouped by register size."""
    return {4: list(range(1, 12)), 3: list(range(12, 19)), 2: list(range(19, 23))}
