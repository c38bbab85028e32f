"""Exception hierarchy shared by the computational modules."""


class FuncEconError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FuncEconError, ValueError):
    """An argument lies outside the domain of the formula."""


class RangeError(FuncEconError, ArithmeticError):
    """A formula produced a non-finite value (overflow)."""
