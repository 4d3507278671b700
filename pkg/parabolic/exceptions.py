class PcfError(Exception):
    """Base class for every error raised by the parabolic app"""


class PoleError(PcfError):
    """Argument sits on a pole of Gamma (or of a function built on it)"""


class ZeroBaseError(PcfError):
    """Fractional power of zero requested"""


class PreconditionError(PcfError):
    """Inputs violate the preconditions of the chosen numerical route"""


class DomainError(PcfError):
    """Parameter point lies outside an identity's validity domain"""

    def __init__(self, reason):
        super().__init__(reason)
        self.reason = reason


class UnknownIdentityError(PcfError):
    """Identity id is not in the catalog"""


class ConvergenceError(PcfError):
    """A series or quadrature ran out of budget before meeting its tolerance"""

    def __init__(self, message, estimate=None, terms=None):
        super().__init__(message)
        self.estimate = estimate
        self.terms = terms
