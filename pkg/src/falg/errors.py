"""Exception types shared across the package."""


class FalgError(Exception):
    """Base class for all package errors."""


class ModeMismatchError(FalgError, ValueError):
    """Operands carry different coefficient modes (exact vs numeric)."""


class TruncationBudgetError(FalgError):
    """The truncation order is too small for the requested result to be exact."""


class NotUnivariateError(FalgError, ValueError):
    """A univariate operation received a series involving X_1, X_2, ..."""


class ActionMismatchError(FalgError, ValueError):
    """Elements of an extension algebra were built over different module actions."""


class RankMismatchError(FalgError, ValueError):
    """Higher-derivation objects of different rank were combined."""


class InvalidWeightsError(FalgError, ValueError):
    """A weight sequence violates positivity or the factorial convexity condition."""


class RetryBudgetExhausted(FalgError):
    """The approximation solver could not meet its bound within the retry budget.

    ``best`` holds the best certificate reached before giving up.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
