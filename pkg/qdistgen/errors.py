"""
Error types for qdistgen.

Every failure the library raises on purpose derives from QDistGenError. The
command-line entry point maps the three families below onto exit codes:
configuration problems (1), numerical failures (2) and gradient-check
failures (3).
"""

from typing import Any, Dict, Optional


class QDistGenError(Exception):
    """Base class for all qdistgen errors."""


class ConfigError(QDistGenError, ValueError):
    """Invalid configuration, usage or input document."""


class TemplateError(ConfigError):
    """An ansatz definition violates the template schema or its invariants.

    Attributes:
        context (Optional[str]): Location of the offending field, for example
            ``ops[3].target``.
    """

    def __init__(self, message: str, context: Optional[str] = None):
        self.context = context
        if context:
            message = f"{context}: {message}"
        super().__init__(message)


class ResourceLimitError(ConfigError):
    """A request exceeds a configured resource cap (e.g. the qubit limit)."""


class GateError(QDistGenError, ValueError):
    """A gate cannot be applied to the given state."""


class NumericalError(QDistGenError, ArithmeticError):
    """A computation produced NaN/inf or left its mathematical domain.

    Attributes:
        iteration (Optional[int]): Training iteration at which the problem was
            detected, when known.
    """

    def __init__(self, message: str, iteration: Optional[int] = None):
        self.iteration = iteration
        if iteration is not None:
            message = f"iteration {iteration}: {message}"
        super().__init__(message)


class DomainError(NumericalError):
    """A divergence is undefined for the given distributions."""


class GradcheckFailure(QDistGenError):
    """Shift-rule gradients disagree with finite differences beyond tolerance."""

    def __init__(self, message: str, report: Optional[Dict[str, Any]] = None):
        self.report = report or {}
        super().__init__(message)
