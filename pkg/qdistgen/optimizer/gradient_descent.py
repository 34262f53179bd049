"""
Gradient-descent training of circuit parameters.

The update is classical (Polyak) momentum,

    v' = beta * v + grad
    theta' = theta - eta * v'

which reduces to plain gradient descent, theta' = theta - eta * grad, when
beta = 0 (the default).
"""

import logging
import math
import time
from concurrent.futures import Executor
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Callable, List, Mapping, Optional, Tuple, Union

import numpy as np

from qdistgen.circuits import CircuitTemplate, check_params
from qdistgen.config import (
    CONVERGENCE_THRESHOLD,
    DEFAULT_COST,
    DEFAULT_INIT,
    DEFAULT_ITERATIONS,
    DEFAULT_MOMENTUM,
    DEFAULT_STEPSIZE,
    LOG_EPSILON,
    MOMENTUM_VARIANT_BETA,
)
from qdistgen.costs import CostKind
from qdistgen.errors import ConfigError, NumericalError
from qdistgen.gradients import cost_and_gradient
from qdistgen.statevector import ProbDist, as_prob_dist

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


class InitScheme(str, Enum):
    """Parameter initialization schemes."""

    ZEROS = "zeros"
    UNIFORM = "uniform"

    @classmethod
    def parse(cls, value: Union[str, "InitScheme"]) -> "InitScheme":
        if isinstance(value, InitScheme):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ConfigError(f"Unknown init scheme: {value!r} (expected zeros or uniform)")


@dataclass(frozen=True)
class TrainConfig:
    """
    Optimizer hyperparameters.

    Attributes:
        stepsize: Learning rate eta > 0
        iterations: Number of parameter updates
        momentum: Momentum coefficient beta in [0, 1); 0 is plain descent
        cost: Cost function to minimize
        init: Parameter initialization scheme
        seed: Seed for the initialization generator
        early_stop: Stop as soon as the cost drops below this value
        convergence_threshold: Cost below which ``converged_at`` is recorded
        log_every: Iterations between DEBUG progress messages
    """

    stepsize: float = DEFAULT_STEPSIZE
    iterations: int = DEFAULT_ITERATIONS
    momentum: float = DEFAULT_MOMENTUM
    cost: CostKind = CostKind(DEFAULT_COST)
    init: InitScheme = InitScheme(DEFAULT_INIT)
    seed: int = 0
    early_stop: Optional[float] = None
    convergence_threshold: float = CONVERGENCE_THRESHOLD
    log_every: int = 100

    def __post_init__(self):
        object.__setattr__(self, "cost", CostKind.parse(self.cost))
        object.__setattr__(self, "init", InitScheme.parse(self.init))
        if not self.stepsize > 0:
            raise ConfigError(f"stepsize must be positive, got {self.stepsize!r}")
        if not 0.0 <= self.momentum < 1.0:
            raise ConfigError(f"momentum must lie in [0, 1), got {self.momentum!r}")
        if not isinstance(self.iterations, (int, np.integer)) or self.iterations < 1:
            raise ConfigError(f"iterations must be a positive integer, got {self.iterations!r}")
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise ConfigError(f"seed must be an unsigned integer, got {self.seed!r}")

    def momentum_variant(self) -> "TrainConfig":
        """Copy of this config with momentum enabled at the standard 0.9."""
        return replace(self, momentum=MOMENTUM_VARIANT_BETA)

    def with_seed(self, seed: int) -> "TrainConfig":
        return replace(self, seed=seed)

    @classmethod
    def from_dict(cls, data: Optional[Mapping[str, Any]]) -> "TrainConfig":
        """Build a config from the ``training`` section of a config file."""
        data = dict(data or {})
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown training options {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return {
            "stepsize": self.stepsize,
            "iterations": self.iterations,
            "momentum": self.momentum,
            "cost": self.cost.value,
            "init": self.init.value,
            "seed": self.seed,
            "early_stop": self.early_stop,
            "convergence_threshold": self.convergence_threshold,
        }


@dataclass
class TrainTrace:
    """
    Outcome of one training run.

    Attributes:
        cost_history: Cost before the first update and after every update
        final_params: Parameters after the last update
        final_dist: Model distribution at ``final_params``
        converged_at: First iteration whose cost fell below the threshold
        initial_params: Starting parameters
        wall_time: Seconds spent in ``train``
    """

    cost_history: List[float]
    final_params: np.ndarray
    final_dist: ProbDist
    converged_at: Optional[int] = None
    initial_params: Optional[np.ndarray] = None
    wall_time: float = 0.0

    @property
    def iterations_run(self) -> int:
        return len(self.cost_history) - 1

    @property
    def final_cost(self) -> float:
        return self.cost_history[-1]


def init_params(
    template: CircuitTemplate,
    scheme: Union[str, InitScheme] = InitScheme.UNIFORM,
    seed: int = 0,
) -> np.ndarray:
    """
    Initial parameter vector for a template.

    UNIFORM draws i.i.d. angles on [0, 2 pi) from numpy's default generator
    (PCG64) seeded with ``seed``.

    Args:
        template: The ansatz
        scheme: ZEROS or UNIFORM
        seed: Generator seed, ignored for ZEROS

    Returns:
        Array of length n_params
    """
    scheme = InitScheme.parse(scheme)
    if scheme is InitScheme.ZEROS:
        return np.zeros(template.n_params)
    rng = np.random.default_rng(seed)
    return rng.uniform(0.0, TWO_PI, size=template.n_params)


def step(
    params: np.ndarray,
    gradient: np.ndarray,
    velocity: np.ndarray,
    config: TrainConfig,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    One momentum update.

    Args:
        params: Current parameters
        gradient: Cost gradient at ``params``
        velocity: Accumulated velocity from the previous step
        config: Supplies stepsize and momentum

    Returns:
        (new params, new velocity)
    """
    params = np.asarray(params, dtype=np.float64)
    gradient = np.asarray(gradient, dtype=np.float64)
    velocity = np.asarray(velocity, dtype=np.float64)
    if not params.shape == gradient.shape == velocity.shape:
        raise ConfigError(
            f"shape mismatch: params {params.shape}, gradient {gradient.shape}, "
            f"velocity {velocity.shape}"
        )
    new_velocity = config.momentum * velocity + gradient
    return params - config.stepsize * new_velocity, new_velocity


def train(
    template: CircuitTemplate,
    target,
    config: Optional[TrainConfig] = None,
    initial_params: Optional[np.ndarray] = None,
    callback: Optional[Callable[[int, np.ndarray, float], None]] = None,
    executor: Optional[Executor] = None,
) -> TrainTrace:
    """
    Fit a template's output distribution to a target.

    Runs ``config.iterations`` updates (fewer when ``early_stop`` triggers),
    recording the cost before the first update and after each one.

    Args:
        template: The ansatz
        target: Target distribution with 2^n entries
        config: Hyperparameters; defaults to TrainConfig()
        initial_params: Explicit starting point, overriding ``config.init``
        callback: Called as callback(iteration, params, cost) after each
            cost evaluation
        executor: Optional executor for the shifted circuit evaluations

    Returns:
        The training trace

    Raises:
        NumericalError: If the cost or gradient becomes non-finite
        DomainError: If the KL cost is undefined for the target
    """
    config = config or TrainConfig()
    q = as_prob_dist(target, n_outcomes=1 << template.n_qubits)

    if initial_params is None:
        params = init_params(template, config.init, config.seed)
    else:
        params = check_params(template, initial_params).copy()
    start_params = params.copy()
    velocity = np.zeros_like(params)

    logger.info(
        f"Training circuit {template.id} ({template.n_params} params) with "
        f"{config.cost.value.upper()}, eta={config.stepsize}, beta={config.momentum}, "
        f"{config.iterations} iterations, seed={config.seed}"
    )

    started = time.perf_counter()
    history: List[float] = []
    converged_at = None
    dist = None

    for iteration in range(config.iterations + 1):
        value, grad, dist = cost_and_gradient(
            template, params, config.cost, q, eps=LOG_EPSILON, executor=executor
        )
        if not math.isfinite(value):
            raise NumericalError(
                f"cost became {value} on circuit {template.id}", iteration=iteration
            )
        history.append(value)

        if converged_at is None and value < config.convergence_threshold:
            converged_at = iteration
        if callback is not None:
            callback(iteration, params, value)
        if config.log_every and iteration % config.log_every == 0:
            logger.debug(f"circuit {template.id} iteration {iteration}: cost {value:.6e}")

        if iteration == config.iterations:
            break
        if config.early_stop is not None and value < config.early_stop:
            logger.info(f"Early stop at iteration {iteration} (cost {value:.3e})")
            break
        if not np.all(np.isfinite(grad)):
            raise NumericalError(
                f"gradient became non-finite on circuit {template.id}", iteration=iteration
            )
        params, velocity = step(params, grad, velocity, config)

    wall_time = time.perf_counter() - started
    logger.info(
        f"Finished circuit {template.id}: cost {history[0]:.4e} -> {history[-1]:.4e} "
        f"in {wall_time:.2f}s"
    )
    return TrainTrace(
        cost_history=history,
        final_params=params,
        final_dist=dist,
        converged_at=converged_at,
        initial_params=start_params,
        wall_time=wall_time,
    )
