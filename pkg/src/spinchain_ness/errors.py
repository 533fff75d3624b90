"""Exception types raised by the solver and its front end."""


class InvalidInputError(ValueError):
    """An argument is outside the accepted domain."""


class ConfigError(InvalidInputError):
    """A run configuration failed validation."""


class CapacityError(InvalidInputError):
    """The requested system is too large for the selected representation."""


class DegenerateSteadyStateError(RuntimeError):
    """The generator kernel is not one-dimensional."""

    def __init__(self, message, nullspace_dimension=None):
        super().__init__(message)
        self.nullspace_dimension = nullspace_dimension


class ConvergenceError(RuntimeError):
    """A solver result did not meet its residual or positivity tolerance."""


class StepSizeError(RuntimeError):
    """The time integrator lost trace beyond tolerance in a single step."""


class NumericalConsistencyError(RuntimeError):
    """An expectation value that must be real carried a large imaginary part."""
