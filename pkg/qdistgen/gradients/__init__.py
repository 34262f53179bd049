"""
Gradients package for qdistgen.

This package computes exact probability Jacobians with the parameter-shift
rule, composes them into cost gradients, and provides finite-difference
oracles to check them.
"""

from qdistgen.gradients.finite_diff import finite_diff_gradient, finite_diff_prob_jacobian
from qdistgen.gradients.shift_rule import (
    PAULI_ROTATION_SHIFT,
    ProbJacobian,
    ShiftSpec,
    cost_and_gradient,
    cost_gradient,
    naive_cost_shift_gradient,
    prob_jacobian,
)

__all__ = [
    "PAULI_ROTATION_SHIFT",
    "ProbJacobian",
    "ShiftSpec",
    "cost_and_gradient",
    "cost_gradient",
    "finite_diff_gradient",
    "finite_diff_prob_jacobian",
    "naive_cost_shift_gradient",
    "prob_jacobian",
]
