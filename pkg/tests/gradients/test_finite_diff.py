"""
Tests for the finite-difference oracle.
"""

import math

import numpy as np
import pytest

from qdistgen.circuits import catalog_get
from qdistgen.costs import CostKind, TargetSpec, target_pmf
from qdistgen.errors import ConfigError
from qdistgen.gradients import (
    cost_gradient,
    finite_diff_gradient,
    finite_diff_prob_jacobian,
    prob_jacobian,
)


def test_rz_only_gradient_is_zero(single_rz):
    grad = finite_diff_gradient(single_rz, [0.7], CostKind.JS, [0.5, 0.5])
    assert abs(grad[0]) <= 1e-10


@pytest.mark.parametrize("h", [0.0, -1e-5])
def test_rejects_nonpositive_step(single_ry, h):
    with pytest.raises(ConfigError):
        finite_diff_gradient(single_ry, [0.1], CostKind.LSE, [1.0, 0.0], h=h)
    with pytest.raises(ConfigError):
        finite_diff_prob_jacobian(single_ry, [0.1], h=h)


def test_error_scales_quadratically():
    """Shrinking h by 10 shrinks the truncation error by about 100."""
    template = catalog_get(20)
    target = target_pmf(TargetSpec.from_name("normal", 2))
    params = np.array([0.9, 2.1])
    exact = cost_gradient(template, params, CostKind.LSE, target)
    coarse = np.max(np.abs(finite_diff_gradient(template, params, CostKind.LSE, target, h=1e-2) - exact))
    fine = np.max(np.abs(finite_diff_gradient(template, params, CostKind.LSE, target, h=1e-3) - exact))
    assert coarse > 0
    assert 50 < coarse / fine < 200


def test_prob_jacobian_oracle(circuit_8, rng):
    params = rng.uniform(0, 2 * math.pi, circuit_8.n_params)
    assert np.allclose(
        finite_diff_prob_jacobian(circuit_8, params), prob_jacobian(circuit_8, params), atol=1e-8
    )
