"""Exception hierarchy shared by every module of the package."""


class CookieDimError(Exception):
    """Base class for all errors raised by cookiedim."""


class DomainError(CookieDimError, ValueError):
    """A point or interval lies outside the unit interval."""


class InvalidMapError(CookieDimError, ValueError):
    """A branch is not a contracting diffeomorphism of [0, 1] into itself."""


class InvalidSystemError(CookieDimError, ValueError):
    """A cookie-cutter or system family violates its structural invariants."""


class ConstructionError(CookieDimError, ValueError):
    """A map could not be built from the supplied constraints."""


class UnsupportedVariantError(CookieDimError, TypeError):
    """The requested operation has no closed form for this map variant."""


class DepthCapError(CookieDimError, RuntimeError):
    """Exact word enumeration would exceed the configured word-count cap."""

    def __init__(self, message: str, best_tolerance: float | None = None):
        super().__init__(message)
        self.best_tolerance = best_tolerance


class SequenceError(CookieDimError, ValueError):
    """Malformed driving sequence or horizon request."""


class ConfigError(CookieDimError, ValueError):
    """Malformed configuration file or command-line override."""
