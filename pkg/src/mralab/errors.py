"""Exception and warning types shared across mralab."""


class MralabError(Exception):
    """Base class for library errors."""


class DomainError(MralabError, ValueError):
    pass


class ConvergenceError(MralabError, ArithmeticError):
    pass


class GridError(MralabError, ValueError):
    """Input not defined on (or compatible with) the required grid."""


class NormalizationError(MralabError, ValueError):
    pass


class ConstraintError(MralabError, ValueError):
    pass


class StochasticityError(MralabError, ValueError):
    pass


class RouteDisagreementError(MralabError, AssertionError):
    """Two independent computations of the same quantity disagree."""


class TruncationWarning(UserWarning):
    """A truncated sum or integral has a non-negligible boundary contribution."""


class NormalizationWarning(UserWarning):
    pass
