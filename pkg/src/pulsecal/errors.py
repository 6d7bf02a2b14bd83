"""Exception types shared across the package."""


class PulsecalError(Exception):
    """Base class for all package-specific errors."""


class ModelError(PulsecalError, ValueError):
    """Invalid transfer-function coefficients or realization request."""


class SingularityError(PulsecalError, ArithmeticError):
    """Evaluation hit a pole, or a lifted model is (near-)singular."""


class OverflowGuardError(PulsecalError, ArithmeticError):
    """An inverse or update exceeded the configured amplitude guard."""

    def __init__(self, message, index=None, value=None):
        super().__init__(message)
        self.index = index
        self.value = value


class NoOscillationError(PulsecalError, ValueError):
    """Trajectory has too few usable extrema for an oscillation fit."""


class ConfigError(PulsecalError, ValueError):
    """Experiment configuration file is missing, malformed, or invalid."""
