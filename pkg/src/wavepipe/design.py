"""Filter design: Butterworth / Chebyshev I cascades, cookbook shelf and
peaking biquads, and windowed-sinc FIR taps.

IIR designs run analog prototype -> frequency prewarp -> bilinear
transform -> second-order sections, so the cutoff-frequency gain of the
analog prototype is preserved exactly. All designs may be created without
a sampling rate ("unbound"); coefficients are then computed when the
filter is bound, and binding later is bit-identical to designing bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import (
    FrequencyOutOfRange,
    InvalidArgument,
    InvalidCoefficients,
    InvalidCutoff,
    InvalidOrder,
    InvalidQ,
    InvalidRipple,
    InvalidTapCount,
    SampleRateMismatch,
    UnboundFilter,
)

__all__ = [
    "DEFAULT_Q",
    "BiquadSection",
    "FilterSpec",
    "IirFilter",
    "FirFilter",
    "design_butterworth",
    "design_chebyshev1",
    "design_shelf",
    "design_peaking",
    "design_fir",
    "frequency_response",
]

DEFAULT_Q = 1.0 / math.sqrt(2.0)

_KIND_ALIASES = {
    "lp": "lowpass",
    "hp": "highpass",
    "bp": "bandpass",
    "lowpass": "lowpass",
    "highpass": "highpass",
    "bandpass": "bandpass",
}

_WINDOWS = ("hamming", "blackman", "rect")


@dataclass(frozen=True)
class BiquadSection:
    """One second-order stage, a0 normalized to 1.

    The denominator must satisfy the stability triangle: |a2| < 1 and
    |a1| < 1 + a2, i.e. both poles strictly inside the unit circle.
    """

    b0: float
    b1: float
    b2: float
    a1: float
    a2: float

    def __post_init__(self):
        if not (abs(self.a2) < 1.0 and abs(self.a1) < 1.0 + self.a2):
            raise InvalidCoefficients(
                f"unstable section: a1={self.a1!r}, a2={self.a2!r} violates |a2|<1, |a1|<1+a2"
            )

    def as_row(self) -> np.ndarray:
        return np.array([self.b0, self.b1, self.b2, self.a1, self.a2], dtype=np.float64)


_IDENTITY_SECTION = BiquadSection(1.0, 0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class FilterSpec:
    """Constructor arguments of a design, kept for lazy binding."""

    family: str
    kind: Optional[str] = None
    order: Optional[int] = None
    fc: Union[float, tuple[float, float], None] = None
    ripple_db: Optional[float] = None
    gain_db: Optional[float] = None
    q: Optional[float] = None
    window: Optional[str] = None


@dataclass(frozen=True, eq=False)
class IirFilter:
    """Cascade of biquad sections, or an unbound design awaiting a rate."""

    sections: tuple[BiquadSection, ...]
    overall_gain: float
    spec: Optional[FilterSpec]
    fs: Optional[int]

    def __post_init__(self):
        if self.fs is not None and not self.sections:
            raise InvalidArgument("bound IIR filter must have at least one section")
        if self.fs is None and self.sections:
            raise InvalidArgument("unbound IIR filter cannot carry sections")
        if self.fs is None and self.spec is None:
            raise InvalidArgument("unbound IIR filter needs a spec to bind later")

    @classmethod
    def from_sections(cls, sections: Sequence[BiquadSection], fs: int, overall_gain: float = 1.0) -> "IirFilter":
        """Raw-coefficient filter, the escape hatch for user-supplied sections."""
        secs = tuple(s if isinstance(s, BiquadSection) else BiquadSection(*s) for s in sections)
        return cls(sections=secs, overall_gain=float(overall_gain), spec=None, fs=int(fs))

    @property
    def bound(self) -> bool:
        return self.fs is not None

    def bind(self, fs: int) -> "IirFilter":
        """Return a filter bound to ``fs``; bound filters pass through."""
        if self.fs is not None:
            if self.fs != fs:
                raise SampleRateMismatch(f"filter bound to {self.fs} Hz cannot rebind to {fs} Hz")
            return self
        return _design_iir_from_spec(self.spec, fs)

    def apply(self, wave, backend: str = "auto"):
        from .engine import apply_iir

        return apply_iir(self, wave, backend=backend)

    def __or__(self, other):
        from .chain import compose

        return compose(self, other)

    def __repr__(self) -> str:
        state = f"fs={self.fs}" if self.bound else "unbound"
        family = self.spec.family if self.spec else "raw"
        return f"IirFilter({family}, {len(self.sections)} sections, {state})"


@dataclass(frozen=True, eq=False)
class FirFilter:
    """Windowed-sinc tap vector, or an unbound design awaiting a rate."""

    taps: Optional[np.ndarray]
    spec: Optional[FilterSpec]
    fs: Optional[int]

    def __post_init__(self):
        if self.fs is not None:
            if self.taps is None or len(self.taps) == 0:
                raise InvalidArgument("bound FIR filter must have taps")
            arr = np.ascontiguousarray(self.taps, dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, "taps", arr)
        else:
            if self.taps is not None:
                raise InvalidArgument("unbound FIR filter cannot carry taps")
            if self.spec is None:
                raise InvalidArgument("unbound FIR filter needs a spec to bind later")

    @classmethod
    def from_taps(cls, taps, fs: int) -> "FirFilter":
        return cls(taps=np.asarray(taps, dtype=np.float64), spec=None, fs=int(fs))

    @property
    def bound(self) -> bool:
        return self.fs is not None

    def bind(self, fs: int) -> "FirFilter":
        if self.fs is not None:
            if self.fs != fs:
                raise SampleRateMismatch(f"filter bound to {self.fs} Hz cannot rebind to {fs} Hz")
            return self
        return _design_fir_from_spec(self.spec, fs)

    def apply(self, wave, backend: str = "auto"):
        from .engine import apply_fir

        return apply_fir(self, wave, backend=backend)

    def __or__(self, other):
        from .chain import compose

        return compose(self, other)

    def __repr__(self) -> str:
        state = f"fs={self.fs}" if self.bound else "unbound"
        ntaps = len(self.taps) if self.taps is not None else "?"
        return f"FirFilter({ntaps} taps, {state})"


# ---------------------------------------------------------------------------
# analog prototypes and transforms (zpk form)
# ---------------------------------------------------------------------------


def _butter_prototype(order: int) -> tuple[np.ndarray, np.ndarray, float]:
    k = np.arange(1, order + 1)
    poles = np.exp(1j * np.pi * (2 * k + order - 1) / (2 * order))
    gain = float(np.real(np.prod(-poles)))  # H(0) = 1
    return np.array([], dtype=complex), poles, gain


def _cheby1_prototype(order: int, ripple_db: float) -> tuple[np.ndarray, np.ndarray, float]:
    eps = math.sqrt(10.0 ** (ripple_db / 10.0) - 1.0)
    mu = math.asinh(1.0 / eps) / order
    k = np.arange(1, order + 1)
    theta = np.pi * (2 * k - 1) / (2 * order)
    poles = -math.sinh(mu) * np.sin(theta) + 1j * math.cosh(mu) * np.cos(theta)
    gain = float(np.real(np.prod(-poles)))
    if order % 2 == 0:
        # even orders keep the prototype DC gain of -ripple dB; the passband
        # maximum, not the DC point, is normalized to 1
        gain /= math.sqrt(1.0 + eps * eps)
    return np.array([], dtype=complex), poles, gain


def _lp_scale(z, p, k, w_analog):
    degree = len(p) - len(z)
    return z * w_analog, p * w_analog, k * w_analog**degree


def _lp_to_hp(z, p, k, w_analog):
    degree = len(p) - len(z)
    z_hp = w_analog / z if len(z) else np.array([], dtype=complex)
    p_hp = w_analog / p
    z_hp = np.append(z_hp, np.zeros(degree, dtype=complex))
    num = np.prod(-z) if len(z) else 1.0
    k_hp = k * float(np.real(num / np.prod(-p)))
    return z_hp, p_hp, k_hp


def _bilinear(z, p, k, fs):
    fs2 = 2.0 * fs
    degree = len(p) - len(z)
    z_d = (fs2 + z) / (fs2 - z)
    p_d = (fs2 + p) / (fs2 - p)
    z_d = np.append(z_d, -np.ones(degree))
    num = np.prod(fs2 - z) if len(z) else 1.0
    k_d = k * float(np.real(num / np.prod(fs2 - p)))
    return z_d, p_d, k_d


def _zpk_to_sections(z_d: np.ndarray, p_d: np.ndarray, k_d: float) -> tuple[tuple[BiquadSection, ...], float]:
    """Pair digital poles/zeros into cascade sections.

    Pinned, deterministic scheme: conjugate pole pairs (and the lone real
    pole of odd orders) sorted by ascending radius, ties broken by
    ascending angle; each pole group takes the nearest remaining zeros.
    """
    pole_groups = _conjugate_groups(p_d)
    pole_groups.sort(key=lambda g: (abs(g[0]), abs(np.angle(g[0]))))
    zeros = list(z_d)
    sections = []
    for group in pole_groups:
        rep = group[0]
        taken = []
        for _ in range(len(group)):
            if zeros:
                nearest = min(range(len(zeros)), key=lambda i: (abs(zeros[i] - rep), i))
                taken.append(zeros.pop(nearest))
        a = np.real(np.poly(np.asarray(group)))
        b = np.real(np.poly(np.asarray(taken))) if taken else np.array([1.0])
        b = np.pad(b, (0, 3 - len(b)))
        a = np.pad(a, (0, 3 - len(a)))
        sections.append(BiquadSection(b[0], b[1], b[2], a[1], a[2]))
    return tuple(sections), float(k_d)


def _conjugate_groups(roots: np.ndarray) -> list[list[complex]]:
    """Group roots into conjugate pairs plus real singles/pairs."""
    complex_roots = [r for r in roots if abs(r.imag) > 1e-12]
    real_roots = sorted((r.real for r in roots if abs(r.imag) <= 1e-12), key=lambda x: (abs(x), x))
    groups = []
    upper = sorted((r for r in complex_roots if r.imag > 0), key=lambda r: (abs(r), np.angle(r)))
    for r in upper:
        groups.append([r, r.conjugate()])
    # pair real roots two by two; a leftover single becomes a first-order section
    while len(real_roots) >= 2:
        groups.append([real_roots.pop(0), real_roots.pop(0)])
    if real_roots:
        groups.append([real_roots.pop()])
    return groups


def _check_order(order) -> int:
    if not isinstance(order, (int, np.integer)) or isinstance(order, bool) or order < 1:
        raise InvalidOrder(f"order must be an integer >= 1, got {order!r}")
    return int(order)


def _check_fc(fc, fs) -> float:
    fc = float(fc)
    if fs is None:
        if fc <= 0:
            raise InvalidCutoff(f"cutoff must be positive, got {fc}")
    elif not 0.0 < fc < fs / 2.0:
        raise InvalidCutoff(f"cutoff {fc} Hz outside (0, {fs / 2.0}) for fs={fs}")
    return fc


def _check_kind(kind, allowed=("lowpass", "highpass")) -> str:
    try:
        kind = _KIND_ALIASES[str(kind).lower()]
    except KeyError:
        raise InvalidArgument(f"unknown filter kind {kind!r}") from None
    if kind not in allowed:
        raise InvalidArgument(f"kind {kind!r} not supported here (allowed: {', '.join(allowed)})")
    return kind


def _prewarp(fc: float, fs: float) -> float:
    return 2.0 * fs * math.tan(math.pi * fc / fs)


# ---------------------------------------------------------------------------
# public designs
# ---------------------------------------------------------------------------


def design_butterworth(kind, order: int, fc: float, fs: Optional[int] = None) -> IirFilter:
    """Maximally flat IIR design; gain at ``fc`` is exactly -3.0103 dB.

    ``kind`` is ``"lowpass"``/``"lp"`` or ``"highpass"``/``"hp"``. With
    ``fs=None`` the design stays unbound until used on a wave or bound
    explicitly.
    """
    kind = _check_kind(kind)
    order = _check_order(order)
    fc = _check_fc(fc, fs)
    spec = FilterSpec(family="butterworth", kind=kind, order=order, fc=fc)
    if fs is None:
        return IirFilter(sections=(), overall_gain=1.0, spec=spec, fs=None)
    z, p, k = _butter_prototype(order)
    w_analog = _prewarp(fc, fs)
    transform = _lp_to_hp if kind == "highpass" else _lp_scale
    z, p, k = transform(z, p, k, w_analog)
    z_d, p_d, k_d = _bilinear(z, p, k, fs)
    sections, gain = _zpk_to_sections(z_d, p_d, k_d)
    return IirFilter(sections=sections, overall_gain=gain, spec=spec, fs=int(fs))


def design_chebyshev1(kind, order: int, ripple_db: float, fc: float, fs: Optional[int] = None) -> IirFilter:
    """Equiripple-passband IIR design, passband maximum normalized to 1.

    Even orders keep the prototype's DC gain of ``-ripple_db`` dB; the
    design is not renormalized to unit DC gain.
    """
    kind = _check_kind(kind)
    order = _check_order(order)
    if not ripple_db > 0:
        raise InvalidRipple(f"ripple_db must be > 0, got {ripple_db!r}")
    fc = _check_fc(fc, fs)
    spec = FilterSpec(family="chebyshev1", kind=kind, order=order, fc=fc, ripple_db=float(ripple_db))
    if fs is None:
        return IirFilter(sections=(), overall_gain=1.0, spec=spec, fs=None)
    z, p, k = _cheby1_prototype(order, float(ripple_db))
    w_analog = _prewarp(fc, fs)
    transform = _lp_to_hp if kind == "highpass" else _lp_scale
    z, p, k = transform(z, p, k, w_analog)
    z_d, p_d, k_d = _bilinear(z, p, k, fs)
    sections, gain = _zpk_to_sections(z_d, p_d, k_d)
    return IirFilter(sections=sections, overall_gain=gain, spec=spec, fs=int(fs))


def design_shelf(kind, fc: float, gain_db: float, q: float = DEFAULT_Q, fs: Optional[int] = None) -> IirFilter:
    """Single-biquad shelf (audio-EQ cookbook form).

    ``lo_shelf`` reaches ``gain_db`` at DC and unity at Nyquist;
    ``hi_shelf`` is the mirror image. ``gain_db`` has no default on
    purpose: a shelf without a gain is meaningless.
    """
    if kind not in ("lo_shelf", "hi_shelf", "loshelf", "hishelf"):
        raise InvalidArgument(f"shelf kind must be lo_shelf or hi_shelf, got {kind!r}")
    kind = kind.replace("shelf", "_shelf") if "_" not in kind else kind
    if not q > 0:
        raise InvalidQ(f"q must be > 0, got {q!r}")
    fc = _check_fc(fc, fs)
    spec = FilterSpec(family=kind, fc=fc, gain_db=float(gain_db), q=float(q))
    if fs is None:
        return IirFilter(sections=(), overall_gain=1.0, spec=spec, fs=None)
    if gain_db == 0.0:
        # a zero-gain shelf is a pass-through; emit the literal identity
        # section instead of a numerically canceling pole/zero pair
        return IirFilter(sections=(_IDENTITY_SECTION,), overall_gain=1.0, spec=spec, fs=int(fs))

    amp = 10.0 ** (float(gain_db) / 40.0)
    w0 = 2.0 * math.pi * fc / fs
    cw, sw = math.cos(w0), math.sin(w0)
    alpha = sw / (2.0 * float(q))
    root_term = 2.0 * math.sqrt(amp) * alpha
    if kind == "lo_shelf":
        b0 = amp * ((amp + 1) - (amp - 1) * cw + root_term)
        b1 = 2 * amp * ((amp - 1) - (amp + 1) * cw)
        b2 = amp * ((amp + 1) - (amp - 1) * cw - root_term)
        a0 = (amp + 1) + (amp - 1) * cw + root_term
        a1 = -2 * ((amp - 1) + (amp + 1) * cw)
        a2 = (amp + 1) + (amp - 1) * cw - root_term
    else:
        b0 = amp * ((amp + 1) + (amp - 1) * cw + root_term)
        b1 = -2 * amp * ((amp - 1) + (amp + 1) * cw)
        b2 = amp * ((amp + 1) + (amp - 1) * cw - root_term)
        a0 = (amp + 1) - (amp - 1) * cw + root_term
        a1 = 2 * ((amp - 1) - (amp + 1) * cw)
        a2 = (amp + 1) - (amp - 1) * cw - root_term
    section = BiquadSection(b0 / a0, b1 / a0, b2 / a0, a1 / a0, a2 / a0)
    return IirFilter(sections=(section,), overall_gain=1.0, spec=spec, fs=int(fs))


def design_peaking(fc: float, gain_db: float, q: float = DEFAULT_Q, fs: Optional[int] = None) -> IirFilter:
    """Peaking EQ biquad: ``gain_db`` at ``fc``, unity at DC and Nyquist."""
    if not q > 0:
        raise InvalidQ(f"q must be > 0, got {q!r}")
    fc = _check_fc(fc, fs)
    spec = FilterSpec(family="peaking", fc=fc, gain_db=float(gain_db), q=float(q))
    if fs is None:
        return IirFilter(sections=(), overall_gain=1.0, spec=spec, fs=None)
    if gain_db == 0.0:
        return IirFilter(sections=(_IDENTITY_SECTION,), overall_gain=1.0, spec=spec, fs=int(fs))

    amp = 10.0 ** (float(gain_db) / 40.0)
    w0 = 2.0 * math.pi * fc / fs
    alpha = math.sin(w0) / (2.0 * float(q))
    b0 = 1 + alpha * amp
    b1 = -2 * math.cos(w0)
    b2 = 1 - alpha * amp
    a0 = 1 + alpha / amp
    a1 = -2 * math.cos(w0)
    a2 = 1 - alpha / amp
    section = BiquadSection(b0 / a0, b1 / a0, b2 / a0, a1 / a0, a2 / a0)
    return IirFilter(sections=(section,), overall_gain=1.0, spec=spec, fs=int(fs))


def design_fir(kind, num_taps: int, fc, window: str = "hamming", fs: Optional[int] = None) -> FirFilter:
    """Windowed ideal-sinc FIR design.

    ``fc`` is a single cutoff for lowpass/highpass and an ``(f1, f2)``
    pair for bandpass. Highpass and bandpass require an odd tap count
    (type-I linear phase); an even count is an error, not auto-adjusted.
    Lowpass: sum of taps = 1. Highpass: |H(Nyquist)| = 1. Bandpass:
    |H| = 1 at the arithmetic center (f1 + f2) / 2.
    """
    kind = _check_kind(kind, allowed=("lowpass", "highpass", "bandpass"))
    if not isinstance(num_taps, (int, np.integer)) or isinstance(num_taps, bool) or num_taps < 3:
        raise InvalidTapCount(f"num_taps must be an integer >= 3, got {num_taps!r}")
    num_taps = int(num_taps)
    if kind in ("highpass", "bandpass") and num_taps % 2 == 0:
        raise InvalidTapCount(f"{kind} needs an odd tap count, got {num_taps}")
    if window not in _WINDOWS:
        raise InvalidArgument(f"window must be one of {_WINDOWS}, got {window!r}")
    if kind == "bandpass":
        try:
            f1, f2 = (float(v) for v in fc)
        except TypeError:
            raise InvalidCutoff(f"bandpass needs an (f1, f2) pair, got {fc!r}") from None
        if not f1 < f2:
            raise InvalidCutoff(f"bandpass needs f1 < f2, got ({f1}, {f2})")
        f1 = _check_fc(f1, fs)
        f2 = _check_fc(f2, fs)
        spec_fc: Union[float, tuple[float, float]] = (f1, f2)
    else:
        spec_fc = _check_fc(fc, fs)
    spec = FilterSpec(family="fir_sinc", kind=kind, order=num_taps, fc=spec_fc, window=window)
    if fs is None:
        return FirFilter(taps=None, spec=spec, fs=None)

    n = np.arange(num_taps, dtype=np.float64)
    m = n - (num_taps - 1) / 2.0  # half-sample shift for even counts
    win = _window(window, num_taps)
    if kind == "lowpass":
        taps = _sinc_lp(spec_fc, fs, m) * win
        taps = taps / np.sum(taps)
    elif kind == "highpass":
        taps = (_delta(m) - _sinc_lp(spec_fc, fs, m)) * win
        nyquist_gain = float(np.sum(taps * np.cos(np.pi * n)))  # H at z = -1, real for type I
        taps = taps / abs(nyquist_gain)
    else:
        f1, f2 = spec_fc
        taps = (_sinc_lp(f2, fs, m) - _sinc_lp(f1, fs, m)) * win
        center = (f1 + f2) / 2.0
        gain = abs(_taps_response(taps, np.array([center]), fs)[0])
        taps = taps / gain
    return FirFilter(taps=taps, spec=spec, fs=int(fs))


def _sinc_lp(fc: float, fs: float, m: np.ndarray) -> np.ndarray:
    wc = 2.0 * math.pi * fc / fs
    out = np.empty_like(m)
    center = m == 0.0
    out[center] = wc / math.pi
    out[~center] = np.sin(wc * m[~center]) / (math.pi * m[~center])
    return out


def _delta(m: np.ndarray) -> np.ndarray:
    return (m == 0.0).astype(np.float64)


def _window(name: str, num_taps: int) -> np.ndarray:
    n = np.arange(num_taps, dtype=np.float64)
    if name == "hamming":
        return 0.54 - 0.46 * np.cos(2.0 * np.pi * n / (num_taps - 1))
    if name == "blackman":
        return (
            0.42
            - 0.5 * np.cos(2.0 * np.pi * n / (num_taps - 1))
            + 0.08 * np.cos(4.0 * np.pi * n / (num_taps - 1))
        )
    return np.ones(num_taps)


# ---------------------------------------------------------------------------
# rebinding and inspection
# ---------------------------------------------------------------------------


def _design_iir_from_spec(spec: FilterSpec, fs: int) -> IirFilter:
    if spec.family == "butterworth":
        return design_butterworth(spec.kind, spec.order, spec.fc, fs)
    if spec.family == "chebyshev1":
        return design_chebyshev1(spec.kind, spec.order, spec.ripple_db, spec.fc, fs)
    if spec.family in ("lo_shelf", "hi_shelf"):
        return design_shelf(spec.family, spec.fc, spec.gain_db, spec.q, fs)
    if spec.family == "peaking":
        return design_peaking(spec.fc, spec.gain_db, spec.q, fs)
    raise InvalidArgument(f"cannot bind IIR spec of family {spec.family!r}")


def _design_fir_from_spec(spec: FilterSpec, fs: int) -> FirFilter:
    if spec.family == "fir_sinc":
        return design_fir(spec.kind, spec.order, spec.fc, spec.window, fs)
    raise InvalidArgument(f"cannot bind FIR spec of family {spec.family!r}")


def _taps_response(taps: np.ndarray, freqs: np.ndarray, fs: float) -> np.ndarray:
    z_inv = np.exp(-2j * np.pi * np.outer(freqs, np.arange(len(taps))) / fs)
    return z_inv @ taps


def frequency_response(filt: Union[IirFilter, FirFilter], freqs) -> np.ndarray:
    """Complex gain H(e^{j 2 pi f / fs}) at each probe frequency.

    The filter must be bound; frequencies must lie in [0, fs/2].
    """
    if filt.fs is None:
        raise UnboundFilter("cannot evaluate the response of an unbound filter")
    freqs = np.atleast_1d(np.asarray(freqs, dtype=np.float64))
    nyquist = filt.fs / 2.0
    bad = (freqs < 0) | (freqs > nyquist)
    if np.any(bad):
        raise FrequencyOutOfRange(f"frequencies {freqs[bad].tolist()} outside [0, {nyquist}]")
    if isinstance(filt, FirFilter):
        return _taps_response(filt.taps, freqs, float(filt.fs))
    z_inv = np.exp(-2j * np.pi * freqs / filt.fs)
    out = np.full(freqs.shape, filt.overall_gain, dtype=complex)
    for s in filt.sections:
        out *= (s.b0 + s.b1 * z_inv + s.b2 * z_inv**2) / (1.0 + s.a1 * z_inv + s.a2 * z_inv**2)
    return out
