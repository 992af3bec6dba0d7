"""Exception hierarchy shared across the package."""


class LogdiamError(Exception):
    """Base class for all package errors."""


class ModulusError(LogdiamError, ValueError):
    """Modulus mismatch, non-divisibility, or invalid factorization."""


class PreconditionError(LogdiamError, ValueError):
    """A documented operation precondition was violated."""


class SeedConditionError(PreconditionError):
    """A seed matrix fails its congruence/valuation conditions."""


class JacobianSingularError(LogdiamError, ArithmeticError):
    """Hensel lifting hit a Jacobian that is singular mod p."""

    def __init__(self, message, jacobian_mod_p=None):
        super().__init__(message)
        self.jacobian_mod_p = jacobian_mod_p


class DecompositionError(LogdiamError, RuntimeError):
    """Internal failure while building a conjugate-word decomposition."""


class BudgetExceededError(LogdiamError, RuntimeError):
    """An enumeration or memory budget would be exceeded."""


class VerificationError(LogdiamError, RuntimeError):
    """An exact verification pass failed; indicates a construction bug."""


class ConfigError(LogdiamError, ValueError):
    """Invalid run configuration / input files."""
