"""Exception hierarchy shared across the package."""


class LevyLabError(Exception):
    """Base class for all package errors."""


class ConfigError(LevyLabError):
    """Invalid parameters, malformed files, or unknown discriminators."""


class PreconditionError(LevyLabError):
    """A caller obligation was violated (wrong norm tags, non-centered spec, ...)."""


class InfiniteMomentError(LevyLabError):
    """A required moment is infinite; carries the offending mode index."""

    def __init__(self, message, mode_index=None):
        super().__init__(message)
        self.mode_index = mode_index


class MeasurabilityError(LevyLabError):
    """A decision rule read path history beyond its anchor time."""


class AssumptionViolation(LevyLabError):
    """A dominating-function inequality failed; carries the inequality name."""

    def __init__(self, message, inequality=None, ratio=None):
        super().__init__(message)
        self.inequality = inequality
        self.ratio = ratio
