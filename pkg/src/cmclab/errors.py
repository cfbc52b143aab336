"""Exception hierarchy for cmclab."""


class CMCLabError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(CMCLabError):
    """A grid, parameter set or experiment config is invalid."""


class DomainError(CMCLabError, ValueError):
    """A coordinate or parameter lies outside the region where a map is defined."""


class NotSpacelikeError(CMCLabError):
    """The graph is not spacelike (L <= 0) at some evaluated node."""


class AccuracyError(CMCLabError):
    """A numerical procedure failed to reach its requested tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class PreconditionError(CMCLabError):
    """An operation was called outside the hypotheses it is valid under."""


class ConstructionError(CMCLabError):
    """A surface could not be built (e.g. no spacelike s-window exists)."""
