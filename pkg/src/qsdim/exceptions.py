"""Exception hierarchy shared by all qsdim modules."""


class QSDimError(Exception):
    """Base class for errors raised by qsdim."""


class DomainError(QSDimError, ValueError):
    """An argument lies outside the range where the quantity is defined."""


class InjectivityError(QSDimError, RuntimeError):
    """A map family collapsed two distinct points (complex radius vanished)."""


class DepthOverflowError(QSDimError, RuntimeError):
    """Cylinder enumeration would exceed the supported depth."""


class NumericError(QSDimError, ArithmeticError):
    """A quadrature or regression produced non-finite values."""
