"""Exception types raised across the package."""


class LindoscError(Exception):
    """Base class for all package errors."""


class ParameterError(LindoscError, ValueError):
    """A physical parameter or argument violates its constraints."""


class StateError(LindoscError, ValueError):
    """A Gaussian state is malformed or unphysical for the requested use."""


class InvalidEnvironmentError(LindoscError, ValueError):
    """An environment coefficient set is structurally unusable."""


class ShapeError(LindoscError, ValueError):
    """A matrix argument has the wrong shape or is not symmetric."""


class SingularSystemError(LindoscError, ArithmeticError):
    """A linear system that should be regular turned out singular."""


class ConfigError(LindoscError, ValueError):
    """A run configuration file is missing, malformed, or incomplete."""
