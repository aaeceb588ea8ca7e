"""Exception types shared across the package.

Each class corresponds to one documented failure mode so callers (and
the CLI's exit-code mapping) can react without string matching.
"""

__all__ = [
    "DualquantError",
    "EmptyDataError",
    "BadValueError",
    "BadWeightError",
    "MapSpecError",
    "MapDomainError",
    "UnsupportedPushforwardError",
    "ContinuityMismatchError",
]


class DualquantError(ValueError):
    """Base class for every error raised by this package."""


class EmptyDataError(DualquantError):
    """A data vector or distribution had no content."""


class BadValueError(DualquantError):
    """A value that must be a finite real was not."""


class BadWeightError(DualquantError):
    """A weight or mass was missing, non-positive, or not a number."""


class MapSpecError(DualquantError):
    """A monotone-map description was malformed or inconsistent."""


class MapDomainError(DualquantError):
    """A map was evaluated outside its domain (e.g. a log of a non-positive value)."""


class UnsupportedPushforwardError(DualquantError):
    """The requested pushforward has no exact closed form in this model."""


class ContinuityMismatchError(DualquantError):
    """The map's one-sided continuity does not support the requested quantile side."""
