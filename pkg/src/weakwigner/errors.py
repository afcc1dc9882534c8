"""Exception types raised by the numerical modules."""


class WeakWignerError(Exception):
    """Base class for every numerical-domain error in the package."""


class GridMismatchError(WeakWignerError):
    """Operands live on different grids."""


class ContainmentError(WeakWignerError):
    """A state carries non-negligible mass at the grid boundary."""

    def __init__(self, message, tail_fraction=None, time=None):
        super().__init__(message)
        self.tail_fraction = tail_fraction
        self.time = time


class OrthogonalityError(WeakWignerError):
    """The overlap <phi|psi> is too small for a weak value to be meaningful."""

    def __init__(self, message, overlap=None):
        super().__init__(message)
        self.overlap = overlap


class CoverageError(WeakWignerError):
    """A truncated basis does not capture enough of a state's norm."""

    def __init__(self, message, captured=None):
        super().__init__(message)
        self.captured = captured


class ConditioningError(WeakWignerError):
    """The auxiliary window is (nearly) orthogonal to the reference state."""

    def __init__(self, message, overlap=None):
        super().__init__(message)
        self.overlap = overlap


class ConfigError(ValueError):
    """Invalid run configuration."""
