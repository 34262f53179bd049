"""
Optimizer package for qdistgen.

This package trains circuit parameters with gradient descent, optionally with
momentum.
"""

from qdistgen.optimizer.gradient_descent import (
    InitScheme,
    TrainConfig,
    TrainTrace,
    init_params,
    step,
    train,
)

__all__ = ["InitScheme", "TrainConfig", "TrainTrace", "init_params", "step", "train"]
