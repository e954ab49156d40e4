"""Exception hierarchy shared by all modules."""


class RisFsoError(Exception):
    """Base class for all toolkit errors."""


class DomainError(RisFsoError, ValueError):
    """An argument lies outside the function's domain."""


class PoleError(DomainError):
    """Evaluation requested at (or numerically too close to) a pole."""


class OverflowRangeError(RisFsoError, OverflowError):
    """Result is not representable in double precision."""


class NonSeparablePolesError(RisFsoError):
    """No vertical contour separates the left and right Gamma pole sets."""


class ConvergenceError(RisFsoError):
    """An iterative evaluation stopped before reaching its tolerance.

    ``achieved`` carries the best relative error estimate reached.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class DegenerateError(RisFsoError, ValueError):
    """Parameters describe a degenerate (zero-variance or zero-power) model."""


class ConfigError(RisFsoError, ValueError):
    """Invalid or inconsistent run configuration."""


class IncompatibleMetricError(ConfigError):
    """A metric was requested for a scenario that does not define it."""
