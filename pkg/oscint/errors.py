from __future__ import annotations

"""Exception types raised by coefficient providers, integrators and the bench."""


class OscintError(Exception):
    """Base class for every error raised by this package."""


class DomainError(OscintError, ValueError):
    """The step size is unusable for the given frequency (v outside the provider domain)."""


class DegenerateDenominator(OscintError, ZeroDivisionError):
    """The phase-lag denominator vanished."""


class IdenticallyZero(OscintError):
    """Phase lag is zero over the whole fit window (infinite phase-lag order)."""


class CorrectorDiverged(OscintError):
    """The implicit corrector did not reach its tolerance."""


class SingularLinearSolve(OscintError, ZeroDivisionError):
    """The closed-form linear corrector hit a vanishing denominator."""


class StepTooLarge(OscintError, ValueError):
    """The starting window does not fit inside the integration interval."""


class DegenerateSample(OscintError):
    """Phase-shift sample points are nearly a multiple of pi/k apart."""


class ConfigError(OscintError, ValueError):
    """A sweep configuration or config file is invalid."""


class UnknownIdentifier(ConfigError, KeyError):
    """A method, problem or metric id is not registered."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""
