"""Exception hierarchy.

Every error raised by the library derives from :class:`SurprisalError`, which is
itself a ``ValueError`` so callers that only care about bad input can catch that.
"""


class SurprisalError(ValueError):
    pass


class NegativeEntry(SurprisalError):
    pass


class NotNormalized(SurprisalError):
    pass


class DimensionMismatch(SurprisalError):
    pass


class ReferenceNotFullRank(SurprisalError):
    pass


class NegativeAlpha(SurprisalError):
    pass


class InvalidReferenceEigenvalue(SurprisalError):
    pass


class DimensionTooSmall(SurprisalError):
    pass


class DimensionCapExceeded(SurprisalError):
    pass


class OutOfRange(SurprisalError):
    pass


class InvalidEpsilon(SurprisalError):
    pass


class InvalidDelta(SurprisalError):
    pass


class ExactSearchTooLarge(SurprisalError):
    pass


class NonpositiveEntropyGap(SurprisalError):
    pass


class ReferenceMismatch(SurprisalError):
    pass


class EmptyInput(SurprisalError):
    pass


class InvalidPowerSums(SurprisalError):
    pass


class InconsistentEntropies(SurprisalError):
    """The supplied Renyi values are not those of any probability vector."""


class ComplexRoots(InconsistentEntropies):
    pass


class NoConvergence(SurprisalError, ArithmeticError):
    pass


class UnknownSuite(SurprisalError, KeyError):
    pass
