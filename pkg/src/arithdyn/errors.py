"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class ArithDynError(Exception):
    exit_code = 1


class DegenerateInputError(ArithDynError, ValueError):
    """All-zero points, singular matrices, degenerate configurations, bad domains."""

    exit_code = 2


class InconsistentValuesError(DegenerateInputError):
    pass


class NotAMorphismError(ArithDynError):
    exit_code = 3


class BaseLocusError(NotAMorphismError):
    """A point where every coordinate polynomial vanishes."""


class InvalidCertificateError(ArithDynError):
    exit_code = 3


class ResourceCeilingError(ArithDynError):
    exit_code = 4
