"""
Costs package for qdistgen.

This package provides the LSE, KL and JS cost functions with their
derivatives, and the target distributions the circuits are trained towards.
"""

from qdistgen.costs.divergences import CostKind, cost, cost_derivative
from qdistgen.costs.targets import TargetKind, TargetSpec, target_pmf

__all__ = [
    "CostKind",
    "TargetKind",
    "TargetSpec",
    "cost",
    "cost_derivative",
    "target_pmf",
]
