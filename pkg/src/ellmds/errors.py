"""Exception types raised across the package."""


class EllMDSError(Exception):
    """Base class for every error raised by ellmds."""


class InternalConsistencyError(EllMDSError, AssertionError):
    """A guaranteed invariant failed; this signals a bug, not bad input."""


# finite fields
class NonPrimeCharacteristic(EllMDSError, ValueError):
    pass


class ReducibleModulus(EllMDSError, ValueError):
    pass


class DivisionByZero(EllMDSError, ZeroDivisionError):
    pass


class MixedContexts(EllMDSError, TypeError):
    pass


class NotASubfield(EllMDSError, ValueError):
    pass


class DegenerateEquation(EllMDSError, ValueError):
    pass


# curves
class SingularCurve(EllMDSError, ValueError):
    pass


class PointNotOnCurve(EllMDSError, ValueError):
    pass


class FieldTooLarge(EllMDSError, ValueError):
    pass


class InadmissibleCount(EllMDSError, ValueError):
    pass


class SearchExhausted(EllMDSError, RuntimeError):
    pass


# groups
class BudgetExceeded(EllMDSError, RuntimeError):
    pass


class DuplicateElements(EllMDSError, ValueError):
    pass


# places and divisors
class SumNotRational(InternalConsistencyError):
    pass


class SampleBudgetExhausted(EllMDSError, RuntimeError):
    pass


class NoWitnessFound(EllMDSError, RuntimeError):
    pass


class WrongCurveShape(EllMDSError, ValueError):
    pass


# Riemann-Roch and codes
class DegenerateStep(InternalConsistencyError):
    pass


class DimensionMismatch(InternalConsistencyError):
    pass


class PoleAtPoint(EllMDSError, ValueError):
    pass


class EchelonNotRational(InternalConsistencyError):
    pass


# constructions
class PreconditionFailed(EllMDSError, ValueError):
    pass


class OddGroupOrder(EllMDSError, ValueError):
    pass


class NotDegreeThree(EllMDSError, ValueError):
    pass


class ConstructionFailedMDS(InternalConsistencyError):
    pass
