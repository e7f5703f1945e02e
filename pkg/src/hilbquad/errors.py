class PreconditionError(ValueError):
    """An input violates the documented precondition of an operation."""


class DomainError(ValueError):
    """The operation is undefined at this input (zero, a pole, ...)."""


class CapacityError(RuntimeError):
    """The input is outside the size range the implementation supports."""
