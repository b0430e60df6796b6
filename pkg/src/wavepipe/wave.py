"""The signal value type: samples bundled with their sampling rate.

A :class:`Wave` couples a planar (channel-major) float64 buffer with the
rate it was sampled at, so downstream code never has to thread ``fs``
through by hand. Waves are immutable; every operation returns a new one.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidArgument

__all__ = ["Wave", "white_noise"]


class Wave:
    """Immutable multichannel signal: shape ``(channels, frames)`` float64 + fs.

    Each channel is a contiguous row, so per-channel processing can slice
    without copying. Use ``wave | filter`` to apply a filter or chain.
    """

    __slots__ = ("samples", "fs")

    samples: np.ndarray
    fs: int

    def __init__(self, samples, fs: int):
        arr = np.array(samples, dtype=np.float64, copy=True, order="C")
        object.__setattr__(self, "samples", _check_buffer(arr))
        object.__setattr__(self, "fs", _check_fs(fs))
        self.samples.setflags(write=False)

    @classmethod
    def _wrap(cls, arr: np.ndarray, fs: int) -> "Wave":
        # Fast path for freshly allocated buffers we own: freeze, don't copy.
        self = object.__new__(cls)
        object.__setattr__(self, "samples", _check_buffer(np.ascontiguousarray(arr)))
        object.__setattr__(self, "fs", _check_fs(fs))
        self.samples.setflags(write=False)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("Wave is immutable")

    @property
    def channels(self) -> int:
        return self.samples.shape[0]

    @property
    def frames(self) -> int:
        return self.samples.shape[1]

    @property
    def duration(self) -> float:
        """Length in seconds."""
        return self.frames / self.fs

    def channel(self, index: int) -> "Wave":
        """Single-channel view of channel ``index`` as a new Wave."""
        return Wave._wrap(self.samples[index : index + 1], self.fs)

    def __or__(self, stage) -> "Wave":
        from .chain import pipe

        return pipe(self, stage)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Wave):
            return NotImplemented
        return self.fs == other.fs and np.array_equal(self.samples, other.samples)

    def __hash__(self):
        return hash((self.fs, self.samples.shape, self.samples.tobytes()))

    def __repr__(self) -> str:
        return f"Wave(channels={self.channels}, frames={self.frames}, fs={self.fs})"


def _check_fs(fs) -> int:
    if isinstance(fs, float):
        if not fs.is_integer():
            raise InvalidArgument(f"fs must be a positive integer, got {fs}")
        fs = int(fs)
    if not isinstance(fs, (int, np.integer)) or isinstance(fs, bool):
        raise InvalidArgument(f"fs must be a positive integer, got {fs!r}")
    if fs <= 0:
        raise InvalidArgument(f"fs must be positive, got {fs}")
    return int(fs)


def _check_buffer(arr: np.ndarray) -> np.ndarray:
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise InvalidArgument(f"samples must be 1-D or 2-D, got {arr.ndim}-D")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidArgument(f"wave needs at least one channel and one frame, got shape {arr.shape}")
    return arr


# splitmix64 finalizer constants; the stream is counter-based, so sample i
# depends only on (seed, i) and any prefix is independent of total length.
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _splitmix64(seed: int, start: int, count: int) -> np.ndarray:
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + idx * _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))


_NOISE_CHUNK_PAIRS = 1 << 21  # bounds intermediate allocations for huge buffers


def _standard_normal(count: int, seed: int) -> np.ndarray:
    # Box-Muller over splitmix64 uniforms. u1 in (0, 1] keeps log() finite;
    # u2 in [0, 1). Pair j draws counters (2j, 2j+1), so values depend only
    # on (seed, position) and chunking cannot change them.
    pairs = (count + 1) // 2
    out = np.empty(2 * pairs, dtype=np.float64)
    for pair_start in range(0, pairs, _NOISE_CHUNK_PAIRS):
        n_pairs = min(_NOISE_CHUNK_PAIRS, pairs - pair_start)
        bits = _splitmix64(seed, 2 * pair_start, 2 * n_pairs)
        u1 = ((bits[0::2] >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53
        u2 = (bits[1::2] >> np.uint64(11)).astype(np.float64) * 2.0**-53
        radius = np.sqrt(-2.0 * np.log(u1))
        angle = 2.0 * np.pi * u2
        flat_start = 2 * pair_start
        out[flat_start : flat_start + 2 * n_pairs : 2] = radius * np.cos(angle)
        out[flat_start + 1 : flat_start + 2 * n_pairs : 2] = radius * np.sin(angle)
    return out[:count]


def white_noise(duration_s: float, channels: int, fs: int, seed: int) -> Wave:
    """Deterministic standard-normal noise for benchmarks and golden tests.

    The generator is pinned: a splitmix64 counter stream hashed from
    ``seed``, turned into N(0, 1) samples with the Box-Muller transform,
    filled channel-major. Same arguments, same buffer, every run; the
    stream is prefix-stable, so channel 0 does not depend on how many
    channels follow it.

    Args:
        duration_s: length in seconds, > 0.
        channels: channel count, >= 1.
        fs: sampling rate in Hz, > 0.
        seed: 64-bit stream seed.

    Returns:
        Wave of shape ``(channels, round(duration_s * fs))``.
    """
    if not isinstance(channels, (int, np.integer)) or channels < 1:
        raise InvalidArgument(f"channels must be >= 1, got {channels!r}")
    if not (isinstance(duration_s, (int, float, np.floating, np.integer)) and duration_s > 0):
        raise InvalidArgument(f"duration_s must be > 0, got {duration_s!r}")
    fs = _check_fs(fs)
    frames = int(round(float(duration_s) * fs))
    if frames < 1:
        raise InvalidArgument(f"duration {duration_s} s at fs {fs} rounds to zero frames")
    flat = _standard_normal(int(channels) * frames, seed)
    return Wave._wrap(flat.reshape(int(channels), frames), fs)
