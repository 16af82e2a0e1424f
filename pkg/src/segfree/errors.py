"""Exception types shared across the toolkit."""


class SegfreeError(Exception):
    """Base class for all toolkit errors."""


class CorpusDecodeError(SegfreeError, ValueError):
    """Input bytes are not valid UTF-8. Carries the failing byte offset."""

    def __init__(self, byte_offset: int, reason: str):
        self.byte_offset = byte_offset
        super().__init__(f"invalid UTF-8 at byte offset {byte_offset}: {reason}")


class NgramLengthError(SegfreeError, ValueError):
    """An n-gram length is outside the range the table was built for."""


class UnknownGramError(SegfreeError, KeyError):
    """A gram was required to be in the candidate set but is not."""


class MeasureUndefinedError(SegfreeError, ValueError):
    """The requested association measure is undefined for this gram (no split)."""


class DegenerateInputError(SegfreeError, ValueError):
    """An aggregate or denominator that must be positive was zero."""


class UnsupportedWindowError(SegfreeError, ValueError):
    """A lattice context window other than 1 was requested."""


class TrainingError(SegfreeError, RuntimeError):
    """Embedding training could not proceed (e.g. empty pair stream)."""


class EvaluationError(SegfreeError, ValueError):
    """An evaluation input violates its contract (empty lexicon, bad labels...)."""


class PipelineStageError(SegfreeError, RuntimeError):
    """A pipeline stage failed. Carries the stage name."""

    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(f"stage '{stage}' failed: {message}")
