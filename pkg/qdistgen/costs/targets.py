"""
Target distributions over the 2^n computational-basis outcomes.

Outcome k is the basis state whose index, read with qubit 0 as the most
significant bit, equals k. The normal target is discretized as a binomial
with p = 0.5; binomial targets use N = 2^n - 1 trials so the support fills the
register exactly. Poisson targets are truncated to 0..2^n-1 and renormalized.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Mapping, Optional, Union

import numpy as np
from scipy.stats import binom, poisson

from qdistgen.config import (
    DEFAULT_BINOMIAL_P,
    DEFAULT_POISSON_LAMBDA,
    MAX_QUBITS,
    NORMAL_P,
)
from qdistgen.errors import ConfigError
from qdistgen.statevector import ProbDist

logger = logging.getLogger(__name__)


class TargetKind(str, Enum):
    UNIFORM = "uniform"
    NORMAL = "normal"
    BINOMIAL = "binomial"
    POISSON = "poisson"


@dataclass(frozen=True)
class TargetSpec:
    """
    Description of a target distribution.

    Args:
        kind: Distribution family
        n_qubits: Register size; the support is {0, ..., 2^n - 1}
        p: Success probability for binomial targets (normal always uses 0.5)
        lam: Rate for Poisson targets
    """

    kind: TargetKind
    n_qubits: int
    p: float = DEFAULT_BINOMIAL_P
    lam: float = DEFAULT_POISSON_LAMBDA

    def __post_init__(self):
        if not isinstance(self.kind, TargetKind):
            object.__setattr__(self, "kind", _parse_kind(self.kind))
        if not isinstance(self.n_qubits, (int, np.integer)) or not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ConfigError(f"target n_qubits must be in 1..{MAX_QUBITS}, got {self.n_qubits!r}")
        if not 0.0 < float(self.p) < 1.0:
            raise ConfigError(f"binomial p must lie strictly between 0 and 1, got {self.p!r}")
        if not float(self.lam) > 0.0:
            raise ConfigError(f"Poisson lambda must be positive, got {self.lam!r}")

    @classmethod
    def from_name(
        cls,
        name: str,
        n_qubits: int,
        p: Optional[float] = None,
        lam: Optional[float] = None,
    ) -> "TargetSpec":
        return cls(
            kind=_parse_kind(name),
            n_qubits=n_qubits,
            p=DEFAULT_BINOMIAL_P if p is None else p,
            lam=DEFAULT_POISSON_LAMBDA if lam is None else lam,
        )

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], n_qubits: int) -> "TargetSpec":
        """Build a spec from a config entry such as ``{"kind": "poisson", "lambda": 2}``."""
        if isinstance(data, str):
            return cls.from_name(data, n_qubits)
        if "kind" not in data:
            raise ConfigError(f"target entry {dict(data)!r} has no 'kind'")
        return cls.from_name(
            data["kind"],
            n_qubits,
            p=data.get("p"),
            lam=data.get("lambda", data.get("lam")),
        )

    def for_qubits(self, n_qubits: int) -> "TargetSpec":
        """Same distribution on a register of a different size."""
        return TargetSpec(self.kind, n_qubits, self.p, self.lam)

    @property
    def label(self) -> str:
        """Short text label, e.g. ``binomial(p=0.1)``."""
        if self.kind is TargetKind.BINOMIAL:
            return f"binomial(p={self.p:g})"
        if self.kind is TargetKind.POISSON:
            return f"poisson(lambda={self.lam:g})"
        return self.kind.value

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"kind": self.kind.value, "n_qubits": self.n_qubits}
        if self.kind is TargetKind.BINOMIAL:
            out["p"] = self.p
        elif self.kind is TargetKind.POISSON:
            out["lambda"] = self.lam
        return out


def _parse_kind(value: Union[str, TargetKind]) -> TargetKind:
    if isinstance(value, TargetKind):
        return value
    try:
        return TargetKind(str(value).lower())
    except ValueError:
        raise ConfigError(
            f"Unknown target {value!r} (expected uniform, normal, binomial or poisson)"
        )


def target_pmf(spec: TargetSpec) -> ProbDist:
    """
    Probability mass function of a target over all 2^n outcomes.

    Args:
        spec: The target description

    Returns:
        Nonnegative float64 array summing to one
    """
    dim = 1 << spec.n_qubits
    k = np.arange(dim)

    if spec.kind is TargetKind.UNIFORM:
        return np.full(dim, 1.0 / dim)

    if spec.kind is TargetKind.POISSON:
        pmf = poisson.pmf(k, spec.lam)
    else:
        p = NORMAL_P if spec.kind is TargetKind.NORMAL else spec.p
        pmf = binom.pmf(k, dim - 1, p)

    pmf = np.asarray(pmf, dtype=np.float64)
    return pmf / pmf.sum()
