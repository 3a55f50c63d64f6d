"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """An argument violates an operation's input contract."""


class FormatError(ValueError):
    """A file cannot be parsed; the message names the offending location."""


class NumericalEscapeError(RuntimeError):
    """An iterated trajectory left its admissible region.

    The ``step`` attribute holds the (0-based) iteration index at which the
    escape was detected, counted from the initial condition.
    """

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step
