"""Exception hierarchy shared by all pipeline stages."""


class TraceRankError(Exception):
    """Base class for every error raised by this package."""


class MissingFile(TraceRankError):
    pass


class EmptyArtifact(TraceRankError):
    pass


class DuplicateId(TraceRankError):
    pass


class DanglingAnswerId(TraceRankError):
    pass


class UnknownSourceId(TraceRankError):
    pass


class FormatError(TraceRankError):
    pass


class MissingVectorForId(TraceRankError):
    pass


class DimensionMismatch(TraceRankError):
    pass


class DomainError(TraceRankError):
    """A numeric argument left its mathematically valid domain (pipeline bug)."""


class EmptyGoldSet(TraceRankError):
    pass


class NoEvaluableSources(TraceRankError):
    pass


class TooFewPairs(TraceRankError):
    pass


class PipelineError(TraceRankError):
    """Wraps a stage failure so callers can report which stage broke."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}': {cause}")
        self.stage = stage
        self.cause = cause
