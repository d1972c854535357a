"""Exception hierarchy.

Two families matter to callers: :class:`InputError` for rejected inputs
(CLI exit code 2, HTTP 400) and :class:`NumericalError` for numerical
breakdown on valid inputs (CLI exit code 3, HTTP 500).
"""


class SkewLabError(Exception):
    """Base class for every error raised by this package."""


class InputError(SkewLabError, ValueError):
    pass


class NumericalError(SkewLabError, ArithmeticError):
    pass


class NotSquare(InputError):
    pass


class NotAntisymmetric(InputError):
    pass


class NotNormal(InputError):
    pass


class TooSmall(InputError):
    pass


class TooLarge(InputError):
    pass


class InvalidParams(InputError):
    pass


class RangeTooSmall(InputError):
    pass


class GridMismatch(InputError):
    pass


class NotEnoughPeaks(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class OutOfValidatedRange(InputError):
    pass


class ConfigError(InputError):
    pass


class PairingFailure(NumericalError):
    def __init__(self, message, k=None):
        super().__init__(message if k is None else f"{message} (k={k!r})")
        self.k = k


class ResidualTooLarge(NumericalError):
    pass


class MismatchBeyondTol(NumericalError):
    pass


class WindowExhausted(NumericalError):
    pass
