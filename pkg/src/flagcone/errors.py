"""Exception types shared across the package."""


class FlagconeError(Exception):
    pass


class NotGraded(FlagconeError):
    """A cover skips a rank, or some maximal chain does not span 0..n+1."""


class NoUniqueExtremes(FlagconeError):
    """Not exactly one bottom (rank 0) or one top (rank n+1) element."""


class CycleDetected(FlagconeError):
    """The cover input contains a loop."""


class NotComparable(FlagconeError):
    """Interval endpoints are not ordered."""


class SizeLimit(FlagconeError):
    """Input exceeds the guarded size for an exhaustive operation."""


class RangeOutOfBounds(FlagconeError):
    """Thickening range leaves the interior ranks of the operand."""


class NotRegular(FlagconeError):
    """Replacement bipartite graph is not regular of the required degree."""


class NotThickEnough(FlagconeError):
    """Some interval has fewer atoms than the selection rule needs."""


class RankMismatch(FlagconeError):
    """Operands declared for incompatible poset ranks."""


class NonIntegerResult(FlagconeError):
    """Inverting an L-vector produced non-integer flag entries."""


class DegreeExceeded(FlagconeError):
    """A limit family entry grows faster than the stated normalization."""


class InterpolationMismatch(FlagconeError):
    """Held-out sample disagrees with the interpolated polynomial."""


class GlueMismatch(FlagconeError):
    """Identified rank-selected subposets are not isomorphic layerwise."""


class ParseError(FlagconeError):
    """Malformed construction expression or functional text."""
