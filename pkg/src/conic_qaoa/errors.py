"""Exception hierarchy shared by all modules."""


class ConicError(Exception):
    """Base class for errors raised by this package."""


class CapacityError(ConicError, ValueError):
    """Problem size exceeds the dense-simulation limits."""


class DescriptorError(ConicError, ValueError):
    """A layer descriptor is malformed or does not fit the state."""


class ShapeError(ConicError, ValueError):
    """Operands have incompatible qubit counts or lengths."""


class ParseError(ConicError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigurationError(ConicError, ValueError):
    """Invalid run, pool or optimizer configuration."""


class NumericalError(ConicError, ArithmeticError):
    """Non-finite values or loss of a structural property (e.g. hermiticity)."""


class DegenerateMetricError(NumericalError):
    """The overlap matrix is numerically zero; no feasible combination exists."""


class DegenerateJumpError(NumericalError):
    """The combined jump vector vanished."""


class VerificationError(ConicError, AssertionError):
    """The ancilla-register simulation disagreed with the direct jump."""
