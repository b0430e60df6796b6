"""RIFF/WAVE reading and writing.

Supports little-endian WAVE files with ``fmt `` tag 1 (16/24-bit PCM) and
tag 3 (32-bit IEEE float), interleaved frames, odd chunks padded per RIFF.
Integer samples are normalized to [-1, 1] by 2^(bits-1) on read; on write
they are clamped to [-1, 1] and quantized round-half-away-from-zero.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, MalformedRiff, UnsupportedEncoding
from .wave import Wave

__all__ = ["WavFormat", "load_wav", "save_wav", "ENCODINGS"]

_FORMAT_PCM = 1
_FORMAT_IEEE_FLOAT = 3

# encoding -> (format tag, bits per sample)
ENCODINGS = {
    "pcm16": (_FORMAT_PCM, 16),
    "pcm24": (_FORMAT_PCM, 24),
    "float32": (_FORMAT_IEEE_FLOAT, 32),
}


@dataclass(frozen=True)
class WavFormat:
    """Validated stream format of a WAV file."""

    encoding: str
    fs: int
    channels: int

    def __post_init__(self):
        if self.encoding not in ENCODINGS:
            raise UnsupportedEncoding(f"encoding must be one of {sorted(ENCODINGS)}, got {self.encoding!r}")
        if self.channels < 1:
            raise InvalidArgument(f"channels must be >= 1, got {self.channels}")
        if self.fs <= 0:
            raise InvalidArgument(f"fs must be positive, got {self.fs}")


def load_wav(path) -> Wave:
    """Read a WAV file into a planar float64 Wave.

    pcm16/pcm24 samples are divided by 2^15 / 2^23; float32 samples are
    widened unchanged. Raises FileNotFoundError, UnsupportedEncoding (with
    the offending format tag) or MalformedRiff.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        fmt, raw = _parse_riff(data)
    except struct.error as exc:
        raise MalformedRiff(f"{path}: truncated chunk ({exc})") from None
    samples = _decode(fmt, raw)
    wav_format = WavFormat(fmt.encoding, fmt.fs, fmt.channels)
    # interleaved frames -> planar channels
    planar = samples.reshape(-1, wav_format.channels).T
    return Wave._wrap(np.ascontiguousarray(planar), wav_format.fs)


def save_wav(wave: Wave, path, encoding: str = "float32") -> int:
    """Write ``wave`` as a canonical RIFF/WAVE file.

    float32 is lossless for a float32 round trip; integer encodings clamp
    to [-1, 1] and quantize round-half-away-from-zero. Clipping is not an
    error: the number of samples that fell outside [-1, 1] is returned.
    """
    if encoding not in ENCODINGS:
        raise UnsupportedEncoding(f"encoding must be one of {sorted(ENCODINGS)}, got {encoding!r}")
    tag, bits = ENCODINGS[encoding]
    interleaved = np.ascontiguousarray(wave.samples.T)
    clipped = 0
    if encoding == "float32":
        payload = interleaved.astype(np.float32).tobytes()
    else:
        clipped = int(np.count_nonzero(np.abs(interleaved) > 1.0))
        full_scale = float(2 ** (bits - 1))
        clamped = np.clip(interleaved, -1.0, 1.0)
        quantized = np.copysign(np.floor(np.abs(clamped) * full_scale + 0.5), clamped)
        ints = np.clip(quantized, -full_scale, full_scale - 1).astype(np.int32)
        if encoding == "pcm16":
            payload = ints.astype("<i2").tobytes()
        else:
            quads = ints.astype("<i4").tobytes()
            payload = bytes(_strip_pcm24(quads))

    block_align = wave.channels * (bits // 8)
    fmt_chunk = struct.pack(
        "<4sIHHIIHH",
        b"fmt ",
        16,
        tag,
        wave.channels,
        wave.fs,
        wave.fs * block_align,
        block_align,
        bits,
    )
    pad = b"\x00" if len(payload) % 2 else b""
    data_chunk = struct.pack("<4sI", b"data", len(payload)) + payload + pad
    riff_size = 4 + len(fmt_chunk) + len(data_chunk)
    with open(path, "wb") as fh:
        fh.write(struct.pack("<4sI4s", b"RIFF", riff_size, b"WAVE"))
        fh.write(fmt_chunk)
        fh.write(data_chunk)
    return clipped


def _strip_pcm24(quads: bytes) -> bytearray:
    # keep the low 3 bytes of each little-endian int32
    out = bytearray(len(quads) // 4 * 3)
    out[0::3] = quads[0::4]
    out[1::3] = quads[1::4]
    out[2::3] = quads[2::4]
    return out


@dataclass
class _RawFormat:
    encoding: str
    fs: int
    channels: int
    bits: int
    block_align: int


def _parse_riff(data: bytes) -> tuple[_RawFormat, bytes]:
    if len(data) < 12:
        raise MalformedRiff("file shorter than a RIFF header")
    magic, riff_size, wave_id = struct.unpack_from("<4sI4s", data, 0)
    if magic != b"RIFF" or wave_id != b"WAVE":
        raise MalformedRiff(f"not a RIFF/WAVE file (magic {magic!r}/{wave_id!r})")
    if riff_size + 8 > len(data):
        raise MalformedRiff(f"RIFF size {riff_size} exceeds file length {len(data)}")

    fmt: _RawFormat | None = None
    raw: bytes | None = None
    offset = 12
    end = 8 + riff_size
    while offset + 8 <= end:
        chunk_id, chunk_size = struct.unpack_from("<4sI", data, offset)
        body_start = offset + 8
        if body_start + chunk_size > end:
            raise MalformedRiff(f"chunk {chunk_id!r} of size {chunk_size} overruns the file")
        body = data[body_start : body_start + chunk_size]
        if chunk_id == b"fmt ":
            fmt = _parse_fmt(body)
        elif chunk_id == b"data":
            raw = body
        offset = body_start + chunk_size + (chunk_size & 1)

    if fmt is None:
        raise MalformedRiff("missing fmt chunk")
    if raw is None:
        raise MalformedRiff("missing data chunk")
    if len(raw) == 0:
        raise MalformedRiff("empty data chunk")
    if len(raw) % fmt.block_align != 0:
        raise MalformedRiff(f"data size {len(raw)} is not a multiple of block align {fmt.block_align}")
    return fmt, raw


def _parse_fmt(body: bytes) -> _RawFormat:
    if len(body) < 16:
        raise MalformedRiff(f"fmt chunk too short ({len(body)} bytes)")
    tag, channels, fs, _byte_rate, block_align, bits = struct.unpack_from("<HHIIHH", body, 0)
    if tag == _FORMAT_PCM and bits == 16:
        encoding = "pcm16"
    elif tag == _FORMAT_PCM and bits == 24:
        encoding = "pcm24"
    elif tag == _FORMAT_IEEE_FLOAT and bits == 32:
        encoding = "float32"
    else:
        raise UnsupportedEncoding(f"format tag {tag} with {bits} bits per sample is not supported")
    if channels < 1:
        raise MalformedRiff("fmt chunk declares zero channels")
    if fs <= 0:
        raise MalformedRiff(f"fmt chunk declares sample rate {fs}")
    if block_align != channels * (bits // 8):
        raise MalformedRiff(f"block align {block_align} inconsistent with {channels} ch x {bits} bits")
    return _RawFormat(encoding, fs, channels, bits, block_align)


def _decode(fmt: _RawFormat, raw: bytes) -> np.ndarray:
    if fmt.encoding == "pcm16":
        return np.frombuffer(raw, dtype="<i2").astype(np.float64) / 2.0**15
    if fmt.encoding == "pcm24":
        triples = np.frombuffer(raw, dtype=np.uint8).reshape(-1, 3)
        quads = np.zeros((triples.shape[0], 4), dtype=np.uint8)
        quads[:, 1:] = triples  # low 3 bytes into the high 3, then >>8 sign-extends
        return (quads.view("<i4")[:, 0] >> 8).astype(np.float64) / 2.0**23
    return np.frombuffer(raw, dtype="<f4").astype(np.float64)
