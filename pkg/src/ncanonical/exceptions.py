"""Exception hierarchy for the three-state ensemble package."""


class EnsembleError(ValueError):
    """Base class for every error raised by this package."""


class DomainError(EnsembleError):
    """The (N, q) pair does not describe a valid molecular domain."""


class InputError(EnsembleError):
    """A numeric argument is malformed (non-finite, wrong type, duplicated states)."""


class ObservableError(EnsembleError):
    """A diagonal observable produced non-finite values or an inconsistent derivative."""


class ConfigError(EnsembleError):
    """A finite-difference or sweep configuration is invalid."""


class UnreachableTargetError(EnsembleError):
    """The requested charge or population lies on or beyond the asymptotes N ± q."""
