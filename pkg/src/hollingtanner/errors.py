"""Exception hierarchy shared by all modules."""


class HollingTannerError(Exception):
    """Base class for errors raised by this package."""


class ParameterError(HollingTannerError, ValueError):
    """Invalid model or configuration parameters."""


class SingularityError(HollingTannerError, ZeroDivisionError):
    """A reaction term was evaluated where a denominator vanishes."""


class NoEquilibriumError(HollingTannerError):
    """The requested equilibrium or bifurcation point does not exist."""


class NotAnEquilibriumError(HollingTannerError, ValueError):
    """A point passed as an equilibrium fails the residual check."""


class TemporallyUnstableError(HollingTannerError):
    """Turing analysis requested at an equilibrium that is unstable without diffusion."""


class IntegrationError(HollingTannerError):
    """Time integration failed (step underflow, negativity, blow-up, NaN)."""

    def __init__(self, message, time=None, location=None):
        super().__init__(message)
        self.time = time
        self.location = location


class UndecidedError(HollingTannerError):
    """Attractor detection reached t_max without a verdict."""


class NoFrontError(HollingTannerError):
    """The tracked level is not crossed in a space-time record."""
