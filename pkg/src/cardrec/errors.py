"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument violates a documented precondition."""


class DomainError(ValueError):
    """An input lies outside the mathematical domain of an operation."""


class SingularityError(ArithmeticError):
    """A spectrum was evaluated at its singular point (the origin)."""


class NumericalFailure(ArithmeticError):
    """A requested accuracy cannot be certified within the supported limits."""
