"""Exception hierarchy shared by the library and the command line."""


class UncertaintyError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class UsageError(UncertaintyError, ValueError):
    """Invalid arguments: bad dimensions, out-of-domain parameters, bad flags."""

    exit_code = 2


class PreconditionError(UncertaintyError, ValueError):
    """Inputs are well formed but violate a hypothesis of the requested relation."""

    exit_code = 3


class NumericError(UncertaintyError, ArithmeticError):
    """A computed quantity drifted outside what exact arithmetic allows."""

    exit_code = 4
