"""
Exception hierarchy for the minorforge package.
"""

from typing import Optional


class MinorForgeError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(MinorForgeError, ValueError):
    """Sampler or builder arguments outside their domain."""


class SamplerExhaustedError(MinorForgeError, RuntimeError):
    """Rejection sampling hit its attempt cap."""

    def __init__(self, message: str, attempts: int):
        super().__init__(message)
        self.attempts = attempts


class InfeasibleParamsError(MinorForgeError):
    """A builder precondition failed.

    ``inequality`` names the broken condition, ``lhs`` and ``rhs`` are the
    two sides that were compared.
    """

    def __init__(
        self,
        inequality: str,
        lhs: float,
        rhs: float,
        detail: Optional[str] = None,
    ):
        message = f"infeasible parameters: {inequality} ({lhs} vs {rhs})"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)
        self.inequality = inequality
        self.lhs = lhs
        self.rhs = rhs


class DegenerateResultError(MinorForgeError):
    """Fewer than two branch sets survived assembly."""

    def __init__(self, survivors: int):
        super().__init__(
            f"degenerate result: only {survivors} branch set(s) survived"
        )
        self.survivors = survivors


class TooLargeError(MinorForgeError, ValueError):
    """Exact search requested above the configured vertex cap."""


class DisconnectedComponentError(MinorForgeError, ValueError):
    """Excess requested for a vertex set that is not connected."""
