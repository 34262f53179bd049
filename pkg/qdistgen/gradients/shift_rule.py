"""
Parameter-shift gradients of output probabilities.

For a gate exp(-i theta G) whose generator G has the two eigenvalues +-r, every
outcome probability obeys

    dP(x)/dtheta = r * (P(x)|theta+s - P(x)|theta-s),   s = pi / (4r).

The rotations used here have r = 1/2, giving the familiar +-pi/2 shift with a
factor 1/2. A slot bound to several gates receives the sum of the shifted
differences of each gate taken separately.

Cost gradients are assembled from the probability Jacobian by the chain rule,
dC/dtheta_j = sum_x dC/dP(x) * dP(x)/dtheta_j. Shifting the cost itself is not
a valid substitute because the costs are nonlinear in P;
naive_cost_shift_gradient keeps that estimate around for comparison only.
"""

import logging
import math
from concurrent.futures import Executor
from dataclasses import dataclass
from functools import partial
from typing import List, Optional, Tuple, Union

import numpy as np

from qdistgen.circuits import CircuitTemplate, check_params, evaluate
from qdistgen.config import LOG_EPSILON
from qdistgen.costs import CostKind, cost, cost_derivative
from qdistgen.errors import ConfigError
from qdistgen.statevector import ProbDist, apply_gate, init_zero_state, probabilities

logger = logging.getLogger(__name__)

# Rows are outcomes, columns are parameter slots.
ProbJacobian = np.ndarray


@dataclass(frozen=True)
class ShiftSpec:
    """
    Two-eigenvalue shift rule.

    Attributes:
        r: Magnitude of the generator eigenvalues (+-r)
    """

    r: float = 0.5

    def __post_init__(self):
        if not self.r > 0:
            raise ConfigError(f"generator eigenvalue magnitude must be positive, got {self.r!r}")

    @classmethod
    def from_eigenvalue(cls, r: float) -> "ShiftSpec":
        return cls(r=float(r))

    @property
    def shift(self) -> float:
        """Shift s = pi / (4r) in radians."""
        return math.pi / (4.0 * self.r)

    @property
    def scale(self) -> float:
        """Factor applied to the shifted difference."""
        return self.r


PAULI_ROTATION_SHIFT = ShiftSpec(0.5)


def _probs_with_gate_offset(
    template: CircuitTemplate, values: np.ndarray, op_index: int, offset: float
) -> ProbDist:
    state = init_zero_state(template.n_qubits)
    for i, (op, angle) in enumerate(template.bind(values)):
        if i == op_index:
            angle = angle + offset
        state = apply_gate(state, op, angle)
    return probabilities(state)


def prob_jacobian(
    template: CircuitTemplate,
    params,
    shift: ShiftSpec = PAULI_ROTATION_SHIFT,
    executor: Optional[Executor] = None,
) -> ProbJacobian:
    """
    Exact Jacobian dP(x)/dtheta_j by the parameter-shift rule.

    Uses two circuit evaluations per gate bound to a slot. With an executor
    the shifted circuits run concurrently; the reduction order is fixed, so
    the result is identical to the sequential one.

    Args:
        template: The ansatz
        params: Current parameter values
        shift: Shift rule matching the generators of the parameterized gates
        executor: Optional concurrent.futures executor

    Returns:
        A (2^n, n_params) float64 array
    """
    values = check_params(template, params)
    occurrences = template.slot_occurrences()

    op_indices: List[int] = []
    offsets: List[float] = []
    for slot in range(template.n_params):
        for op_index in occurrences[slot]:
            op_indices += [op_index, op_index]
            offsets += [+shift.shift, -shift.shift]

    # Must stay picklable for process pools
    worker = partial(_probs_with_gate_offset, template, values)
    if executor is not None:
        results = list(executor.map(worker, op_indices, offsets))
    else:
        results = [worker(i, offset) for i, offset in zip(op_indices, offsets)]

    jacobian = np.zeros((1 << template.n_qubits, template.n_params))
    k = 0
    for slot in range(template.n_params):
        for _ in occurrences[slot]:
            jacobian[:, slot] += shift.scale * (results[k] - results[k + 1])
            k += 2
    return jacobian


def _target_array(template: CircuitTemplate, target) -> np.ndarray:
    q = np.asarray(target, dtype=np.float64).reshape(-1)
    if q.shape[0] != 1 << template.n_qubits:
        raise ConfigError(
            f"target has {q.shape[0]} outcomes but circuit {template.id} "
            f"produces {1 << template.n_qubits}"
        )
    return q


def cost_and_gradient(
    template: CircuitTemplate,
    params,
    cost_kind: Union[str, CostKind],
    target,
    shift: ShiftSpec = PAULI_ROTATION_SHIFT,
    eps: float = LOG_EPSILON,
    executor: Optional[Executor] = None,
) -> Tuple[float, np.ndarray, ProbDist]:
    """
    Cost, its gradient and the model distribution at ``params``.

    Returns:
        (cost value, gradient over slots, model distribution P)
    """
    q = _target_array(template, target)
    p = evaluate(template, params)
    value = cost(cost_kind, p, q)
    d_cost = cost_derivative(cost_kind, p, q, eps=eps)
    jacobian = prob_jacobian(template, params, shift=shift, executor=executor)
    return value, d_cost @ jacobian, p


def cost_gradient(
    template: CircuitTemplate,
    params,
    cost_kind: Union[str, CostKind],
    target,
    shift: ShiftSpec = PAULI_ROTATION_SHIFT,
    eps: float = LOG_EPSILON,
    executor: Optional[Executor] = None,
) -> np.ndarray:
    """
    Gradient of a cost with respect to the circuit parameters.

    Args:
        template: The ansatz
        params: Current parameter values
        cost_kind: LSE, KL or JS
        target: Target distribution Q
        shift: Shift rule for the parameterized gates
        eps: Floor applied inside logarithms of the cost derivative
        executor: Optional executor for the shifted circuit evaluations

    Returns:
        Array of length n_params

    Raises:
        DomainError: For KL when the target vanishes where the model does not
    """
    return cost_and_gradient(template, params, cost_kind, target, shift, eps, executor)[1]


def naive_cost_shift_gradient(
    template: CircuitTemplate,
    params,
    cost_kind: Union[str, CostKind],
    target,
    shift: ShiftSpec = PAULI_ROTATION_SHIFT,
) -> np.ndarray:
    """
    Shift rule applied to the cost instead of the probabilities.

    Not a gradient of the cost in general; exists to compare against the
    chain-rule result.
    """
    values = check_params(template, params)
    q = _target_array(template, target)
    grad = np.zeros(template.n_params)
    for j in range(template.n_params):
        plus = values.copy()
        plus[j] += shift.shift
        minus = values.copy()
        minus[j] -= shift.shift
        grad[j] = shift.scale * (
            cost(cost_kind, evaluate(template, plus), q)
            - cost(cost_kind, evaluate(template, minus), q)
        )
    return grad
