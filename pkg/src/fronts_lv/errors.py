"""Exception hierarchy shared by the solvers and the command line."""


class FrontsError(Exception):
    """Base class for all package errors."""


class RegimeError(FrontsError):
    """Parameters fall outside the regime an operation is defined for."""


class SemiWaveError(FrontsError):
    """Root bracketing for the semi-wave speed failed.

    ``scan`` holds the (k, F(k)) pairs that were evaluated.
    """

    def __init__(self, message, scan=()):
        super().__init__(message)
        self.scan = list(scan)


class SolverError(FrontsError):
    """Numerical failure inside a time integration (NaN, clamp-mass breach, dt underflow)."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class InvariantBreach(SolverError):
    """A runtime a-priori bound (density or front-velocity ceiling, front monotonicity) was violated."""


class InsufficientData(FrontsError):
    pass


class InconclusiveThreshold(FrontsError):
    """Bisection could not separate vanishing from spreading within its retry budget."""

    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket


class ConfigError(FrontsError):
    pass
