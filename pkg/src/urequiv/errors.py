"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`UncertaintyError`, which is itself a ``ValueError`` so that callers
doing plain input validation keep working.
"""


class UncertaintyError(ValueError):
    """Base class for all library errors."""


# linear algebra
class NotHermitian(UncertaintyError):
    pass


class NoConvergence(UncertaintyError, ArithmeticError):
    pass


class DimensionMismatch(UncertaintyError):
    pass


class NonRealExpectation(UncertaintyError):
    pass


# states
class NotNormalized(UncertaintyError):
    pass


class InvalidBloch(UncertaintyError):
    pass


# observables
class NonCommuting(UncertaintyError):
    pass


class DegenerateSpectrum(UncertaintyError):
    pass


class InvalidAxis(UncertaintyError):
    pass


# reconstruction
class RankDeficient(UncertaintyError):
    pass


class InconsistentVariances(UncertaintyError):
    pass


class AmbiguousDistribution(UncertaintyError):
    """All pair products vanish: the state sits on one unknown eigenvalue.

    ``fallback`` holds the conventional answer (all weight on the first
    eigenvalue) for callers that want to proceed anyway.
    """

    def __init__(self, message, fallback=None):
        super().__init__(message)
        self.fallback = fallback


class NumericallyDegenerate(UncertaintyError, ArithmeticError):
    pass


class VanishingDenominator(UncertaintyError, ArithmeticError):
    pass


# entropy
class VarianceOutOfRange(UncertaintyError):
    pass


class EntropyOutOfRange(UncertaintyError):
    pass


class ArgumentOutOfRange(UncertaintyError):
    pass


# relations
class NotQubit(UncertaintyError):
    pass


class NotSpinOne(UncertaintyError):
    pass


class DomainError(UncertaintyError):
    pass


class UnknownRelation(UncertaintyError, KeyError):
    pass


# explorer
class DegenerateObjective(UncertaintyError):
    pass


class InfeasibleTarget(UncertaintyError):
    pass
