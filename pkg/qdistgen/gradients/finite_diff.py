"""
Central finite differences, used as an independent oracle for the
shift-rule gradients.
"""

from typing import Union

import numpy as np

from qdistgen.circuits import CircuitTemplate, check_params, evaluate
from qdistgen.config import DEFAULT_FD_STEP
from qdistgen.costs import CostKind, cost
from qdistgen.errors import ConfigError


def _check_step(h: float) -> float:
    if not h > 0:
        raise ConfigError(f"finite-difference step must be positive, got {h!r}")
    return float(h)


def finite_diff_gradient(
    template: CircuitTemplate,
    params,
    cost_kind: Union[str, CostKind],
    target,
    h: float = DEFAULT_FD_STEP,
) -> np.ndarray:
    """
    (C(theta_j + h) - C(theta_j - h)) / 2h for every slot j.

    Args:
        template: The ansatz
        params: Point at which to differentiate
        cost_kind: LSE, KL or JS
        target: Target distribution Q
        h: Step size in radians

    Returns:
        Array of length n_params
    """
    h = _check_step(h)
    values = check_params(template, params)
    grad = np.zeros(template.n_params)
    for j in range(template.n_params):
        plus = values.copy()
        plus[j] += h
        minus = values.copy()
        minus[j] -= h
        grad[j] = (
            cost(cost_kind, evaluate(template, plus), target)
            - cost(cost_kind, evaluate(template, minus), target)
        ) / (2.0 * h)
    return grad


def finite_diff_prob_jacobian(
    template: CircuitTemplate, params, h: float = DEFAULT_FD_STEP
) -> np.ndarray:
    """Central-difference estimate of dP(x)/dtheta_j, shape (2^n, n_params)."""
    h = _check_step(h)
    values = check_params(template, params)
    jacobian = np.zeros((1 << template.n_qubits, template.n_params))
    for j in range(template.n_params):
        plus = values.copy()
        plus[j] += h
        minus = values.copy()
        minus[j] -= h
        jacobian[:, j] = (evaluate(template, plus) - evaluate(template, minus)) / (2.0 * h)
    return jacobian
