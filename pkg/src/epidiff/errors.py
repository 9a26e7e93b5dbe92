"""Exception hierarchy shared by every epidiff module."""


class EpidiffError(Exception):
    """Base class for all errors raised by epidiff."""


class ConfigurationError(EpidiffError, ValueError):
    """Invalid run configuration, parameter set or coefficient declaration."""


class DomainError(EpidiffError, ValueError):
    """A pointwise kernel was called outside its mathematical domain."""


class ContractViolation(EpidiffError, ValueError):
    """Operands do not fit together (grid mismatch, wrong vector length)."""


class SolverError(EpidiffError):
    """A linear solve did not reach its tolerance."""

    def __init__(self, message: str, iterations: int = 0, residual: float = float("nan")) -> None:
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class StepFailure(SolverError):
    """A time step was still rejected after the maximum number of halvings."""


class NumericalAbort(EpidiffError):
    """A non-finite value appeared in the state."""
