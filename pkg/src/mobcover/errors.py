"""Shared exception taxonomy.

Every error raised by the library derives from :class:`MobError` so callers
can catch one base class at API boundaries (the CLI maps them to exit codes).
"""


class MobError(Exception):
    """Base class for all library errors."""


class ZeroVectorError(MobError, ValueError):
    """A row with (near-)zero norm cannot be normalized."""


class DimensionMismatchError(MobError, ValueError):
    """Two embedding sets disagree on the embedding dimension."""


class EmptySetError(MobError, ValueError):
    """An operation received an empty point set."""


class NonFiniteValueError(MobError, ValueError):
    """Embedding data contains NaN or Inf."""


class DegenerateSampleError(MobError, ValueError):
    """Calibration sample too small or has zero variance."""


class BudgetExceedsPopulationError(MobError, ValueError):
    """Requested more selections than there are unselected rows."""


class BudgetTooSmallError(MobError, ValueError):
    """A budget heuristic produced a prompt budget below one."""


class TooLargeError(MobError, ValueError):
    """Instance exceeds the hard cap of an exhaustive oracle."""


class DegenerateFitError(MobError, ValueError):
    """Covering counts carry no slope information in the radius window."""


class InfeasibleEtaError(MobError, ValueError):
    """The requested coupling target cannot be realized by the generator."""


class FormatError(MobError):
    """Base class for file-format errors."""


class BadMagicError(FormatError):
    """File does not start with the expected magic bytes."""


class UnsupportedVersionError(FormatError):
    """Header declares a version or field value this reader does not support."""


class TruncatedPayloadError(FormatError):
    """Payload length does not match the header's n*d*itemsize."""


class IoFailureError(FormatError):
    """Underlying read/write failed."""
