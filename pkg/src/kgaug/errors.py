"""Exception hierarchy shared across the package.

Each error class carries the process exit code the CLI maps it to, so the
exit-code contract lives in one place.
"""


class KgaugError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ConfigError(KgaugError):
    """Invalid configuration value, missing path, or bad CLI usage."""

    exit_code = 2


class DatasetParseError(KgaugError):
    """Malformed dataset file (wrong field count, duplicate ids, ...)."""

    exit_code = 3


class ResolutionError(DatasetParseError):
    """A triple references an entity or relation id absent from the tables."""


class PromptError(KgaugError):
    """A template cannot be rendered for the given entity context."""

    exit_code = 2


class GatewayError(KgaugError):
    """Chat endpoint unreachable or retries exhausted."""

    exit_code = 4


class ProtocolError(GatewayError):
    """Endpoint answered, but the body is not a valid chat completion."""


class TrainingDiverged(KgaugError):
    """Non-finite loss or parameters encountered during training."""

    exit_code = 5


class ExportError(KgaugError):
    """Export target unwritable or the graph has unresolved entities."""

    exit_code = 6


class RunLockError(KgaugError):
    """The run directory is owned by another process."""

    exit_code = 6
