"""Exception types raised across the package."""


class InvalidResolution(ValueError):
    """Grid resolution below the supported minimum."""


class IncompatibleGrids(ValueError):
    """Two fields or operators live on different grids."""


class InvalidCoefficient(ValueError):
    """A PDE or controller coefficient violates its admissible range."""


class DomainError(ValueError):
    """Argument outside the domain of a function (e.g. negative time)."""


class UnfittableSeries(ValueError):
    """A series cannot be log-linearly fitted over the requested window."""


class InsufficientTrace(ValueError):
    """A trace lacks the data needed for the requested analysis."""


class ConfigError(ValueError):
    """Malformed configuration file or unknown key."""


class ValidationError(ConfigError):
    """Configuration parsed but a field violates its invariant."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class DivergenceError(RuntimeError):
    """The integrator produced non-finite values.

    ``time`` is the simulated time at which the failure was detected and
    ``trace`` holds everything recorded up to that point.
    """

    def __init__(self, time: float, trace=None):
        super().__init__(f"simulation diverged at t={time:.6g}")
        self.time = time
        self.trace = trace
