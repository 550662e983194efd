"""Exception hierarchy shared by all modules."""


class RadiiError(ValueError):
    """Base class for all errors raised by this package."""


class RankDeficient(RadiiError):
    pass


class DimensionMismatch(RadiiError):
    pass


class NotEnclosing(RadiiError):
    pass


class NotASimplex(RadiiError):
    pass


class NotAHyperplane(RadiiError):
    pass


class InvalidJ(RadiiError):
    pass


class DegenerateValues(RadiiError):
    """Raised when the value triple makes the multiplicity system singular."""


class SingularDenominator(RadiiError):
    pass


class NegativeRadicand(RadiiError):
    pass


class MalformedSolution(RadiiError):
    pass
