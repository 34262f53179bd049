"""
Compare shift-rule gradients against central finite differences.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from qdistgen.circuits import CircuitTemplate
from qdistgen.config import (
    DEFAULT_FD_STEP,
    DEFAULT_GRADCHECK_POINTS,
    DEFAULT_GRADCHECK_TOLERANCE,
)
from qdistgen.costs import CostKind, TargetKind, TargetSpec, target_pmf
from qdistgen.errors import ConfigError, GradcheckFailure
from qdistgen.gradients import cost_gradient, finite_diff_gradient
from qdistgen.optimizer import InitScheme, init_params

logger = logging.getLogger(__name__)

DEFAULT_TARGET_KINDS = (
    TargetKind.UNIFORM,
    TargetKind.NORMAL,
    TargetKind.BINOMIAL,
    TargetKind.POISSON,
)


@dataclass
class CircuitCheck:
    """Worst deviation found on one circuit."""

    circuit_id: str
    max_deviation: float = 0.0
    worst_target: Optional[str] = None
    worst_seed: Optional[int] = None
    n_comparisons: int = 0


@dataclass
class GradcheckReport:
    tolerance: float
    h: float
    cost_kind: str
    circuits: List[CircuitCheck] = field(default_factory=list)

    @property
    def max_deviation(self) -> float:
        return max((c.max_deviation for c in self.circuits), default=0.0)

    @property
    def failures(self) -> List[CircuitCheck]:
        return [c for c in self.circuits if c.max_deviation > self.tolerance]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tolerance": self.tolerance,
            "h": self.h,
            "cost_kind": self.cost_kind,
            "passed": self.passed,
            "max_deviation": self.max_deviation,
            "circuits": [vars(c).copy() for c in self.circuits],
        }


def gradcheck(
    circuits: Sequence[CircuitTemplate],
    seeds: Sequence[int] = tuple(range(DEFAULT_GRADCHECK_POINTS)),
    h: float = DEFAULT_FD_STEP,
    tolerance: float = DEFAULT_GRADCHECK_TOLERANCE,
    cost_kind: Union[str, CostKind] = CostKind.JS,
    targets: Sequence[Union[str, TargetKind]] = DEFAULT_TARGET_KINDS,
    raise_on_failure: bool = False,
) -> GradcheckReport:
    """
    Check shift-rule cost gradients against central finite differences.

    Each seed draws one uniform random parameter point per circuit; the
    gradient of ``cost_kind`` towards every target is compared component-wise.
    KL is only checked against targets without zero entries.

    Args:
        circuits: Templates to check
        seeds: One random parameter point per seed
        h: Finite-difference step
        tolerance: Largest accepted absolute deviation
        cost_kind: Cost whose gradient is checked
        targets: Target kinds, instantiated per circuit register size
        raise_on_failure: Raise GradcheckFailure instead of returning a
            failing report

    Returns:
        Per-circuit maximum deviations
    """
    if not h > 0:
        raise ConfigError(f"finite-difference step must be positive, got {h!r}")
    if not tolerance > 0:
        raise ConfigError(f"tolerance must be positive, got {tolerance!r}")
    cost_kind = CostKind.parse(cost_kind)
    report = GradcheckReport(tolerance=float(tolerance), h=float(h), cost_kind=cost_kind.value)

    for template in circuits:
        check = CircuitCheck(circuit_id=template.id)
        specs = [TargetSpec.from_name(t, template.n_qubits) for t in targets]
        for spec in specs:
            q = target_pmf(spec)
            if cost_kind is CostKind.KL and np.any(q <= 0):
                logger.debug(f"Skipping KL check of {spec.label}: target has zero entries")
                continue
            for seed in seeds:
                params = init_params(template, InitScheme.UNIFORM, seed)
                exact = cost_gradient(template, params, cost_kind, q)
                approx = finite_diff_gradient(template, params, cost_kind, q, h=h)
                deviation = float(np.max(np.abs(exact - approx), initial=0.0))
                check.n_comparisons += 1
                if deviation > check.max_deviation:
                    check.max_deviation = deviation
                    check.worst_target = spec.label
                    check.worst_seed = int(seed)
        status = "ok" if check.max_deviation <= tolerance else "FAIL"
        logger.info(
            f"gradcheck circuit {template.id}: max deviation {check.max_deviation:.3e} [{status}]"
        )
        report.circuits.append(check)

    if not report.passed:
        ids = ", ".join(c.circuit_id for c in report.failures)
        message = (
            f"gradient check failed on circuit(s) {ids}: max deviation "
            f"{report.max_deviation:.3e} exceeds tolerance {tolerance:.1e}"
        )
        logger.error(message)
        if raise_on_failure:
            raise GradcheckFailure(message, report=report.to_dict())
    return report
