"""Exception hierarchy shared by all modules."""


class StarSpecError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(StarSpecError, ValueError):
    """Input or configuration rejected (CLI exit code 2)."""


class NumericalError(StarSpecError, ArithmeticError):
    """A numerical procedure failed to meet its tolerance (CLI exit code 3)."""


class Confinement(ValidationError):
    pass


class AngleOrdering(ValidationError):
    pass


class AngleRange(ValidationError):
    pass


class IndexOutOfRange(ValidationError):
    pass


class NotSymmetric(ValidationError):
    pass


class DegenerateConstants(ValidationError):
    pass


class ZeroStrength(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class NotAnEigenvalue(ValidationError):
    pass


class NoZeroMode(ValidationError):
    pass


class SolverDiverged(NumericalError):
    pass


class OddCount(NumericalError):
    pass


class NotUnitary(NumericalError):
    pass


class PhaseResolution(NumericalError):
    pass


class MatchingResidual(NumericalError):
    pass
