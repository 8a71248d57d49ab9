"""Exception types shared across the library."""


class ConfigurationError(ValueError):
    """Invalid parameter, dimension mismatch, or malformed input."""


class ValidationError(ConfigurationError):
    """Configuration rejected during parsing; carries the offending field path."""

    def __init__(self, message, field=None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)


class DivergenceError(ArithmeticError):
    """A filter update produced non-finite values; carries the iteration index."""

    def __init__(self, iteration, message=None):
        self.iteration = iteration
        super().__init__(message or f"filter diverged at iteration {iteration}")


class StabilityError(ValueError):
    """Step size violates the stability region of a closed-form expression."""
