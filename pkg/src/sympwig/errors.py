"""Exception types raised across the package.

Every precondition failure is a :class:`ValidationError` (a ``ValueError``),
so callers that only care about "bad input" can catch one class.  Search
failures are kept separate because they are not the caller's fault.
"""


class SympWigError(Exception):
    """Base class for all package errors."""


class ValidationError(SympWigError, ValueError):
    """An input violated a documented precondition."""


class NotSymmetric(ValidationError):
    pass


class NonFinite(ValidationError):
    pass


class NotPositiveDefinite(ValidationError):
    pass


class MalformedHermitian(ValidationError):
    pass


class NotSkew(ValidationError):
    pass


class Singular(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class PairingFailure(SympWigError, ArithmeticError):
    """Singular values of a skew matrix did not come in equal pairs."""


class DegeneratePair(ValidationError):
    pass


class BadLambdas(ValidationError):
    pass


class FormsCoincide(ValidationError):
    pass


class FormMismatch(ValidationError):
    pass


class NotDarboux(ValidationError):
    pass


class BadSplit(ValidationError):
    pass


class DegenerateCombination(ValidationError):
    pass


class DegreeBudgetExceeded(ValidationError):
    pass


class BudgetExceeded(ValidationError):
    pass


class TooManyPoints(ValidationError):
    pass


class SearchExhausted(SympWigError, RuntimeError):
    """A constructive search ran out of candidates.

    ``diagnostics`` carries whatever the search learned (best value seen,
    number of candidates tried) so the failure can be reported.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class NontrivialFormAtN1(UserWarning):
    """A one-mode form was rescaled; at n=1 every normalized form is +-J."""
