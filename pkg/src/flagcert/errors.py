"""Exception hierarchy; each class carries the CLI exit code it maps to."""


class FlagcertError(Exception):
    exit_code = 2


class InputError(FlagcertError, ValueError):
    """Malformed arguments, files or objects."""

    exit_code = 2


class CostGuardError(FlagcertError):
    """A request exceeds a size limit that keeps computations at desk scale."""

    exit_code = 3


class CertificateError(InputError):
    """A certificate is malformed or does not match the local enumerations."""
