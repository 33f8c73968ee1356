"""Exception types shared by the toolkit."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class PreconditionError(ValueError):
    """Caller-supplied data violates a checked precondition."""


class NumericError(ArithmeticError):
    """A numerical routine failed to converge."""


class ResourceError(RuntimeError):
    """A computation would exceed a configured size budget."""
