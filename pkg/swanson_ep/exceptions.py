"""
Error hierarchy shared by the library and the command line.

InputError and DomainError are ValueErrors so callers can catch them the usual way;
NumericalFailure carries whatever the iteration had when it gave up.
"""


class SwansonError(Exception):
    pass


class InputError(SwansonError, ValueError):
    pass


class DomainError(SwansonError, ValueError):
    def __init__(self, message, deficit=None):
        super().__init__(message)
        self.deficit = deficit


class NumericalFailure(SwansonError, ArithmeticError):
    def __init__(self, message, iterates=None, residuals=None, t=None):
        super().__init__(message)
        self.iterates = iterates
        self.residuals = residuals
        self.t = t

    def __str__(self):
        msg = super().__str__()
        if self.t is not None:
            msg += f" (at t={self.t!r})"
        return msg


class ConfigError(SwansonError):
    pass
