"""Exception types raised across the library.

Builtin ``FileNotFoundError`` / ``OSError`` are used for plain file-system
failures; everything domain-specific derives from :class:`WavepipeError`.
"""


class WavepipeError(Exception):
    """Base class for all wavepipe errors."""


class InvalidArgument(WavepipeError, ValueError):
    """An argument violates a documented precondition."""


class InvalidCutoff(InvalidArgument):
    """Cutoff/center frequency outside (0, fs/2)."""


class InvalidOrder(InvalidArgument):
    """Filter order below 1."""


class InvalidRipple(InvalidArgument):
    """Chebyshev passband ripple must be > 0 dB."""


class InvalidQ(InvalidArgument):
    """Quality factor must be > 0."""


class InvalidTapCount(InvalidArgument):
    """FIR tap count unusable for the requested kind."""


class InvalidCoefficients(InvalidArgument):
    """Raw coefficients violate normalization or stability requirements."""


class UnboundFilter(WavepipeError):
    """Operation requires a filter already bound to a sampling rate."""


class SampleRateMismatch(WavepipeError):
    """Two sampling rates that must agree do not."""


class FrequencyOutOfRange(InvalidArgument):
    """Probe frequency outside [0, fs/2]."""


class UnsupportedEncoding(WavepipeError):
    """WAV encoding not in the supported set (pcm16, pcm24, float32)."""


class MalformedRiff(WavepipeError):
    """RIFF/WAVE container is truncated or internally inconsistent."""


class ChainSpecError(WavepipeError):
    """Base class for chain-spec text errors; carries a 1-based column."""

    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.column = column


class ParseError(ChainSpecError):
    """Chain-spec text does not match the grammar."""

    def __init__(self, message: str, column: int, expected: tuple[str, ...] = ()):
        if expected:
            message = f"{message} (expected {' or '.join(expected)})"
        super().__init__(message, column)
        self.expected = expected


class UnknownFilter(ChainSpecError):
    """Stage name not in the filter catalog."""


class UnknownArgument(ChainSpecError):
    """Argument name not accepted by the stage."""


class MissingRequiredArgument(ChainSpecError):
    """Stage constructed without one of its required arguments."""
