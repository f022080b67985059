"""Exception hierarchy shared by all fractube modules."""


class FractubeError(Exception):
    """Base class for every error raised by this package."""


class DegenerateShape(FractubeError):
    pass


class InvalidWord(FractubeError):
    pass


class BudgetExceeded(FractubeError):
    pass


class DivergentSeries(FractubeError):
    pass


class NearPole(FractubeError):
    pass


class NumericalFailure(FractubeError):
    pass


class IncompleteRootSet(FractubeError):
    """Newton search and argument-principle count disagree."""

    def __init__(self, found, expected, message=None):
        self.found = found
        self.expected = expected
        super().__init__(
            message or f"root search found {found} roots, argument principle counts {expected}"
        )


class NotSimplePole(FractubeError):
    pass


class PoleClusterError(FractubeError):
    pass


class NotMonophase(FractubeError):
    """Raised when a generator's tube function changes form below its inradius.

    ``breakpoint`` is the first erosion event (the smallest epsilon at which
    the polynomial form changes).
    """

    def __init__(self, breakpoint, message=None):
        self.breakpoint = breakpoint
        super().__init__(message or f"not monophase: tube formula changes form at eps={breakpoint:.12g}")
