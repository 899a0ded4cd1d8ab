"""Exception hierarchy shared by the solver, the domain modules and the CLI"""


class CoherenceError(Exception):
    """Base class for every error raised by this package"""


class InputError(CoherenceError, ValueError):
    """Malformed or inconsistent input; maps to CLI exit code 1"""


class DimensionMismatchError(InputError):
    pass


class ScenarioMismatchError(InputError):
    pass


class EnumerationLimitError(InputError):
    pass


class OutsideDomainError(InputError):
    pass


class NoRepresentationError(InputError):
    """phi(1) = 0 while phi does not vanish on its domain"""


class NotIntegrableError(CoherenceError, ValueError):
    pass


class InvariantError(CoherenceError, RuntimeError):
    """A certificate failed re-verification; maps to CLI exit code 2"""


class SchemaViolationError(InputError):
    """Instance does not match the shipped JSON schema of its command"""
