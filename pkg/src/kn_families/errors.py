"""Exception hierarchy shared by all modules."""


class KNError(Exception):
    """Base class for library errors."""


class InversionLeadingNonUnit(KNError, ArithmeticError):
    pass


class TruncationTooShallow(KNError, ValueError):
    pass


class InconsistentBinding(KNError, ValueError):
    pass


class SingularLine(KNError, ValueError):
    """The requested fiber is a nodal cubic (discriminant zero)."""


class NotOnCurve(KNError, ValueError):
    pass


class DimensionMismatch(KNError, ValueError):
    pass


class InvalidLieAlgebra(KNError, ValueError):
    pass


class NotPolynomialInE(KNError, ValueError):
    pass


class RecursionInconsistent(KNError, ArithmeticError):
    """The level-by-level cocycle system is contradictory or underdetermined."""


class NonInvariantForm(KNError, ValueError):
    pass


class NonConstantDivision(KNError, ArithmeticError):
    pass
