"""Exception hierarchy.

Precondition failures (bad operator, bad PSD form) derive from
:class:`PreconditionError`; malformed matrix files derive from
:class:`FormatError`. The CLI maps these families to exit codes 3 and 2.
"""


class SemiHilbertError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(SemiHilbertError):
    """An input violates a mathematical precondition of the operation."""


class DimensionMismatch(PreconditionError, ValueError):
    pass


class NotHermitian(PreconditionError, ValueError):
    pass


class NotPositive(PreconditionError, ValueError):
    pass


class ZeroOperator(PreconditionError, ValueError):
    pass


class NotABounded(PreconditionError, ValueError):
    pass


class NoAdjoint(PreconditionError, ValueError):
    pass


class ZeroSeminorm(PreconditionError, ValueError):
    pass


class NotSmoothPrecondition(PreconditionError, ValueError):
    """Raised when an operation needs a unique norming direction (k == 1)."""


class SmoothOperator(PreconditionError, ValueError):
    """Raised when an operation needs a non-smooth operator (k >= 2)."""


class NumericalFailure(SemiHilbertError, ArithmeticError):
    """Two independent numerical routes disagreed, or a certificate failed."""


class FormatError(SemiHilbertError, ValueError):
    pass


class ParseError(FormatError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class DimensionError(ParseError):
    pass


class NonFiniteEntry(ParseError):
    pass
