"""Exception types shared across the package."""


class LoadgenError(Exception):
    """Base class for all errors raised by this package."""

    kind = "error"


class DimensionError(LoadgenError):
    """Array shapes do not match an operation's contract."""

    kind = "dimension"


class ConfigError(LoadgenError):
    """Invalid configuration value or unusable config file."""

    kind = "config"


class IngestError(LoadgenError):
    """Raw meter CSV could not be ingested."""

    kind = "ingest"


class PipelineError(LoadgenError):
    """A pipeline stage cannot run (missing input, empty survivor set, ...)."""

    kind = "pipeline"


class TrainingDivergedError(LoadgenError):
    """Training produced a non-finite loss."""

    kind = "training-diverged"


class CheckpointFormatError(LoadgenError):
    """Checkpoint file is unreadable or has an unsupported format version."""

    kind = "checkpoint-format"


class EmptyFilterError(LoadgenError):
    """A requested data filter matched no profiles."""

    kind = "empty-filter"
