"""Exception hierarchy shared by the library and the CLI."""


class PoissonKError(Exception):
    """Base class for all errors raised by poissonk."""


class InvalidParamsError(PoissonKError, ValueError):
    """Rejected distribution parameters (k < 1, lambda <= 0, ...)."""


class UnsupportedRangeError(PoissonKError, ValueError):
    """Request exceeds a documented practical cap (exact paths, oracle)."""


class PrecisionError(PoissonKError, ArithmeticError):
    """Floating point could not settle a result, even after escalation."""


class CrossCheckError(PrecisionError):
    """The two independent recurrences disagree beyond tolerance."""


class AmbiguousTieError(PrecisionError):
    """A near-tie that extended precision could not classify."""

    def __init__(self, message, lam=None, candidates=()):
        super().__init__(message)
        self.lam = lam
        self.candidates = tuple(candidates)


class InconsistentRootError(PrecisionError):
    """A computed root fails its own verification."""


class PossibleTieError(PrecisionError):
    """Two unit roots are too close to say which one comes first."""

    def __init__(self, message, lam=None, candidates=()):
        super().__init__(message)
        self.lam = lam
        self.candidates = tuple(candidates)


class UnresolvedTransitionError(PrecisionError):
    """A mode-set transition could not be localized to a single breakpoint."""

    def __init__(self, message, lam=None):
        super().__init__(message)
        self.lam = lam


class BracketError(PoissonKError, RuntimeError):
    """A root bracket violated a sign condition that theory guarantees."""


class DataIntegrityError(PoissonKError, ValueError):
    """Input data for a fit violates a known structural bound."""
