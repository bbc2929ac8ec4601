"""Exception taxonomy; each class maps to a CLI exit code."""


class RiemannpiError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ConfigurationError(RiemannpiError):
    """Missing or inconsistent run configuration (bad flags, absent files)."""

    exit_code = 2


class DataIntegrityError(RiemannpiError):
    """Corrupt input data: parse failures, non-monotone zero tables, bad checksums."""

    exit_code = 3


class DomainError(RiemannpiError):
    """Argument outside an operation's mathematical domain."""

    exit_code = 4


class RangeLimitError(DomainError):
    """Query beyond the range covered by an oracle or zero table."""


class ResourceError(RiemannpiError):
    """Configured resource cap exceeded (sieve limit, precision hard cap)."""

    exit_code = 5


class PrecisionEscalationError(ResourceError):
    """Requested accuracy cannot be met by the selected evaluation path."""
