"""Exception hierarchy shared by every module of the package."""


class SphericalError(Exception):
    """Base class for all errors raised by :mod:`padic_spherical`."""


# exact algebra
class DivisionByZero(SphericalError, ZeroDivisionError):
    pass


class VarMismatch(SphericalError, ValueError):
    pass


class SpecializationPole(SphericalError, ZeroDivisionError):
    pass


class NoUnitConstantTerm(SphericalError, ValueError):
    pass


class InexactDivision(SphericalError, ArithmeticError):
    """An exact division left a remainder; always indicates a bug upstream."""


# combinatorics / closed forms
class BadLength(SphericalError, ValueError):
    pass


class NoClosedForm(SphericalError, ValueError):
    pass


# oracle
class LevelTooSmall(SphericalError):
    pass


class UnsupportedCase(SphericalError):
    pass


class MismatchBeyondTail(SphericalError):
    """A coefficient that the enumeration determines exactly disagrees with the closed form."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotInOpenOrbit(SphericalError):
    pass


class CosetDecompositionFailure(SphericalError):
    pass


# zeta integrals
class WindowOverflow(SphericalError):
    pass


class ZeroZeta(SphericalError, ZeroDivisionError):
    pass


class MismatchFailure(SphericalError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
