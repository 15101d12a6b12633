"""Exception hierarchy shared by all bregmat modules.

The CLI maps these onto process exit codes: bad input (usage) -> 2,
numerical failure -> 4.  Mathematical check failures are not exceptions;
they are regular report verdicts (exit 3).
"""


class BregmatError(Exception):
    """Base class for all bregmat errors."""


class DomainError(BregmatError):
    """An argument is outside the mathematical domain of the operation."""


class ContractViolation(BregmatError):
    """An input violates a structural precondition (shape, unitarity, ...)."""


class UnsupportedFamilyError(BregmatError):
    """The requested operation needs data the function family does not carry."""


class NumericalFailureError(BregmatError):
    """A numerical routine failed to reach its accuracy target."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ConditioningError(NumericalFailureError):
    """A matrix or superoperator is too ill-conditioned to invert reliably."""

    def __init__(self, message, eigenvalue_ratio=None):
        super().__init__(message, residual=eigenvalue_ratio)
        self.eigenvalue_ratio = eigenvalue_ratio


class SchemaError(BregmatError):
    """A matrix/state file does not match the JSON schema."""


class HermiticityError(BregmatError):
    """A matrix that must be Hermitian is not, within tolerance."""


class StateValidationError(BregmatError):
    """A density matrix fails the trace-one or positivity requirement."""
