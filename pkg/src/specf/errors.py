"""Exception types shared across the package."""


class SpecfError(Exception):
    """Base class for all errors raised by :mod:`specf`."""


class InputError(SpecfError, ValueError):
    """Malformed input: bad file contents, mismatched sizes, invalid parameters."""


class DisconnectedGraphError(SpecfError, ValueError):
    """The graph has more than one connected component."""


class ConvergenceError(SpecfError, ArithmeticError):
    """An iterative numerical routine did not converge.

    Attributes
    ----------
    residual : float
        Size of the remaining off-diagonal mass (or equivalent) when the
        iteration stopped.
    """

    def __init__(self, message, residual=float("nan")):
        super().__init__(message)
        self.residual = residual
