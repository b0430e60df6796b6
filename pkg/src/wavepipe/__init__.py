"""wavepipe: multichannel audio filtering with composable filter chains.

Signals travel as :class:`Wave` values that carry their own sampling
rate. Filters are designed once, chained with ``|``, and bound to a rate
lazily when they meet a wave::

    from wavepipe import design_shelf, load_wav, save_wav

    signal = load_wav("in.wav")
    result = signal | design_shelf("hi_shelf", 1000, gain_db=3) \
                    | design_shelf("lo_shelf", 2000, gain_db=3)
    save_wav(result, "out.wav")
"""

__version__ = "0.1.0"

from .chain import Chain, bind, compose, pipe
from .design import (
    DEFAULT_Q,
    BiquadSection,
    FilterSpec,
    FirFilter,
    IirFilter,
    design_butterworth,
    design_chebyshev1,
    design_fir,
    design_peaking,
    design_shelf,
    frequency_response,
)
from .engine import (
    apply_fir,
    apply_iir,
    get_num_threads,
    iir_oracle,
    jit_available,
    jit_enabled,
    set_jit_enabled,
    set_num_threads,
)
from .errors import (
    ChainSpecError,
    FrequencyOutOfRange,
    InvalidArgument,
    InvalidCoefficients,
    InvalidCutoff,
    InvalidOrder,
    InvalidQ,
    InvalidRipple,
    InvalidTapCount,
    MalformedRiff,
    MissingRequiredArgument,
    ParseError,
    SampleRateMismatch,
    UnboundFilter,
    UnknownArgument,
    UnknownFilter,
    UnsupportedEncoding,
    WavepipeError,
)
from .wave import Wave, white_noise
from .wavio import WavFormat, load_wav, save_wav

__all__ = [
    "__version__",
    "Wave",
    "white_noise",
    "WavFormat",
    "load_wav",
    "save_wav",
    "BiquadSection",
    "FilterSpec",
    "IirFilter",
    "FirFilter",
    "DEFAULT_Q",
    "design_butterworth",
    "design_chebyshev1",
    "design_shelf",
    "design_peaking",
    "design_fir",
    "frequency_response",
    "apply_iir",
    "apply_fir",
    "iir_oracle",
    "jit_available",
    "jit_enabled",
    "set_jit_enabled",
    "get_num_threads",
    "set_num_threads",
    "Chain",
    "compose",
    "bind",
    "pipe",
    "WavepipeError",
    "InvalidArgument",
    "InvalidCutoff",
    "InvalidOrder",
    "InvalidRipple",
    "InvalidQ",
    "InvalidTapCount",
    "InvalidCoefficients",
    "UnboundFilter",
    "SampleRateMismatch",
    "FrequencyOutOfRange",
    "UnsupportedEncoding",
    "MalformedRiff",
    "ChainSpecError",
    "ParseError",
    "UnknownFilter",
    "UnknownArgument",
    "MissingRequiredArgument",
]
