"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the operation is defined."""


class ConvergenceError(RuntimeError):
    """An iterative procedure failed to converge.

    ``last`` carries whatever partial result the procedure had when it gave up.
    """

    def __init__(self, message, last=None):
        super().__init__(message)
        self.last = last


class OutputError(OSError):
    """Writing a result file failed; the message names the path."""
