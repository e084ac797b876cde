"""Exception hierarchy shared by the library and the command line."""


class SpinPicError(Exception):
    exit_code = 1


class UsageError(SpinPicError, ValueError):
    """A violated precondition or malformed argument."""

    exit_code = 2


class CertificationFailure(SpinPicError):
    """A torsion certificate could not be established."""

    exit_code = 3


class InvariantViolation(SpinPicError, AssertionError):
    """An internal consistency check failed; indicates a bug, not bad input."""

    exit_code = 4
