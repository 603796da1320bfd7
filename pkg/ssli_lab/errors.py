class SsliError(Exception):
    """Base class for every failure raised by the lab."""


class DuplicateRoots(SsliError):
    pass


class PoleHit(SsliError):
    pass


class NonPositiveCoefficient(SsliError):
    pass


class RootOnCut(SsliError):
    """A root landed on the negative real axis or at zero."""


class DegreeTooLow(SsliError):
    pass


class BranchCut(SsliError):
    pass


class QuadratureFailure(SsliError):
    pass


class ContourTooTight(SsliError):
    pass


class DimensionMismatch(SsliError):
    pass


class NotDominated(SsliError):
    pass


class GenerationFailure(SsliError):
    pass


class NonPositiveDeterminant(SsliError):
    pass


class NotDensityMatrix(SsliError):
    pass


class UnsupportedDimension(SsliError):
    pass


class SearchFailure(SsliError):
    pass


class InvalidInstance(SsliError):
    """Instance document failed schema or value checks."""


class IndexOutOfRange(SsliError, IndexError):
    pass


class NotPositiveDefinite(SsliError):
    pass
