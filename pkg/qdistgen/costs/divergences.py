"""
Cost functions between a model distribution P and a target distribution Q.

All logarithms are natural. The JS cost is the symmetric sum
KL(P||M) + KL(Q||M) with M = (P + Q) / 2, which is twice the conventional
Jensen-Shannon divergence and therefore bounded by 2 ln 2.
"""

import logging
from enum import Enum
from typing import Union

import numpy as np
from scipy.special import xlogy

from qdistgen.config import LOG_EPSILON
from qdistgen.errors import ConfigError, DomainError

logger = logging.getLogger(__name__)


class CostKind(str, Enum):
    """Supported cost functions."""

    LSE = "lse"
    KL = "kl"
    JS = "js"

    @classmethod
    def parse(cls, value: Union[str, "CostKind"]) -> "CostKind":
        if isinstance(value, CostKind):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ConfigError(f"Unknown cost kind: {value!r} (expected lse, kl or js)")


def _pair(P, Q):
    p = np.asarray(P, dtype=np.float64).reshape(-1)
    q = np.asarray(Q, dtype=np.float64).reshape(-1)
    if p.shape != q.shape:
        raise ConfigError(f"Distribution lengths differ: {p.shape[0]} vs {q.shape[0]}")
    return p, q


def _check_kl_domain(p: np.ndarray, q: np.ndarray) -> None:
    bad = np.flatnonzero((p > 0) & (q <= 0))
    if bad.size:
        raise DomainError(
            f"KL divergence undefined: target has zero probability at outcomes "
            f"{bad.tolist()} where the model does not; use the JS cost instead"
        )


def _kl_terms(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    # xlogy gives 0 for p == 0; the division is only taken where p > 0
    ratio = np.divide(p, q, out=np.ones_like(p), where=p > 0)
    return xlogy(p, ratio)


def _js_value(p: np.ndarray, q: np.ndarray) -> float:
    m = 0.5 * (p + q)
    # Evaluate both halves elementwise and add per outcome before summing, so
    # swapping P and Q gives the same floating-point terms.
    terms = _kl_terms(p, m) + _kl_terms(q, m)
    return float(np.sum(terms))


def cost(kind: Union[str, CostKind], P, Q) -> float:
    """
    Evaluate a cost between model output P and target Q.

    Args:
        kind: LSE, KL or JS
        P: Model distribution
        Q: Target distribution

    Returns:
        A nonnegative real

    Raises:
        ConfigError: If P and Q differ in length
        DomainError: For KL when Q(x) = 0 < P(x)
    """
    kind = CostKind.parse(kind)
    p, q = _pair(P, Q)

    if kind is CostKind.LSE:
        diff = p - q
        value = float(np.dot(diff, diff))
    elif kind is CostKind.KL:
        _check_kl_domain(p, q)
        value = float(np.sum(_kl_terms(p, q)))
    else:
        value = _js_value(p, q)

    # Rounding can leave -1e-17 on identical inputs
    return max(value, 0.0)


def cost_derivative(
    kind: Union[str, CostKind], P, Q, eps: float = LOG_EPSILON
) -> np.ndarray:
    """
    Partial derivatives dC/dP(x) of a cost with respect to the model output.

    Logarithm arguments are clamped at ``eps`` where P(x) vanishes; the
    probabilities themselves are never modified.

    Args:
        kind: LSE, KL or JS
        P: Model distribution
        Q: Target distribution
        eps: Floor applied inside logarithms

    Returns:
        Array of the same length as P

    Raises:
        DomainError: For KL when Q(x) = 0 < P(x)
    """
    kind = CostKind.parse(kind)
    p, q = _pair(P, Q)

    if kind is CostKind.LSE:
        return 2.0 * (p - q)

    if kind is CostKind.KL:
        _check_kl_domain(p, q)
        # Outcomes with P = Q = 0 sit at a minimum of P(x), where the
        # Jacobian row vanishes; their derivative is reported as 0.
        safe_q = np.where(q > 0, q, 1.0)
        return np.where(q > 0, np.log(np.maximum(p, eps) / safe_q) + 1.0, 0.0)

    # d/dP of P ln(2P/(P+Q)) + Q ln(2Q/(P+Q)) collapses to ln(2P/(P+Q))
    p_log = np.maximum(p, eps)
    return np.log(2.0 * p_log / (p_log + q))
