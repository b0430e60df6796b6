"""Filter chains: ordered composition with lazy sample-rate binding.

A chain is a flat, immutable sequence of stages applied left to right.
Stages may be created without a sampling rate; ``pipe`` (or ``wave |
chain``) binds them to the wave's rate at application time, and binding
later is bit-identical to designing bound. Conflicting pre-bound rates
are a hard error, never a silent redesign.

Any object implementing ``bind(fs) -> stage`` and ``apply(wave, backend)
-> Wave`` can appear as a stage; the built-in IIR/FIR filters are the
common case.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .design import frequency_response
from .errors import InvalidArgument, SampleRateMismatch, UnboundFilter
from .wave import Wave

__all__ = ["Chain", "compose", "bind", "pipe"]


class Chain:
    """Flattened sequence of filter stages, optionally bound to one rate."""

    __slots__ = ("stages", "binding")

    def __init__(self, stages=()):
        flat = []
        for stage in stages:
            if isinstance(stage, Chain):
                flat.extend(stage.stages)
            else:
                _check_stage(stage)
                flat.append(stage)
        object.__setattr__(self, "stages", tuple(flat))
        object.__setattr__(self, "binding", _common_binding(flat))

    def __setattr__(self, name, value):
        raise AttributeError("Chain is immutable")

    def __len__(self) -> int:
        return len(self.stages)

    def __iter__(self):
        return iter(self.stages)

    @property
    def bound(self) -> bool:
        return self.binding is not None

    def bind(self, fs: int) -> "Chain":
        """Bind every stage to ``fs``; already-bound matching stages pass through."""
        bound_stages = []
        for stage in self.stages:
            stage_fs = getattr(stage, "fs", None)
            if stage_fs is not None and stage_fs != fs:
                raise SampleRateMismatch(f"stage {stage!r} is bound to {stage_fs} Hz, cannot bind chain to {fs} Hz")
            bound_stages.append(stage.bind(fs))
        return Chain(bound_stages)

    def apply(self, wave: Wave, backend: str = "auto") -> Wave:
        """Apply stages left to right. Stages must already be bound."""
        out = wave
        for stage in self.stages:
            out = stage.apply(out, backend=backend)
        return out

    def frequency_response(self, freqs):
        """Product of the stage responses; chain must be bound."""
        if not self.bound and self.stages:
            raise UnboundFilter("bind the chain to a sampling rate before evaluating its response")
        freqs = np.atleast_1d(np.asarray(freqs, dtype=np.float64))
        out = np.ones(freqs.shape, dtype=complex)
        for stage in self.stages:
            out = out * frequency_response(stage, freqs)
        return out

    def __or__(self, other):
        return compose(self, other)

    def __repr__(self) -> str:
        state = f"fs={self.binding}" if self.bound else "unbound"
        return f"Chain({len(self.stages)} stages, {state})"


def _check_stage(stage) -> None:
    if not (hasattr(stage, "bind") and hasattr(stage, "apply")):
        raise InvalidArgument(
            f"{stage!r} is not a filter stage (needs bind(fs) and apply(wave, backend))"
        )


def _common_binding(stages) -> Optional[int]:
    binding = None
    for stage in stages:
        fs = getattr(stage, "fs", None)
        if fs is None:
            return None
        if binding is None:
            binding = fs
        elif fs != binding:
            # unreachable through compose/bind, which resolve conflicts first
            raise SampleRateMismatch(f"chain stages bound to different rates: {binding} and {fs}")
    return binding


def compose(left, right) -> Chain:
    """Concatenate two stages or chains into one flat chain.

    If either side is bound, the other side is bound to the same rate, so
    the result is either fully bound or fully unbound. Two sides pre-bound
    to different rates are a SampleRateMismatch.
    """
    left_chain = left if isinstance(left, Chain) else Chain([left])
    right_chain = right if isinstance(right, Chain) else Chain([right])
    left_fs = left_chain.binding
    right_fs = right_chain.binding
    if left_fs is not None and right_fs is not None and left_fs != right_fs:
        raise SampleRateMismatch(f"cannot compose chains bound to {left_fs} Hz and {right_fs} Hz")
    fs = left_fs if left_fs is not None else right_fs
    if fs is not None:
        left_chain = left_chain.bind(fs)
        right_chain = right_chain.bind(fs)
    return Chain(left_chain.stages + right_chain.stages)


def bind(stage, fs: int) -> "Chain | object":
    """Bind a chain or single stage to ``fs`` (filters expose .bind too)."""
    return stage.bind(fs)


def pipe(wave: Wave, stage, backend: str = "auto") -> Wave:
    """Apply a filter or chain to a wave, binding it to the wave's rate.

    ``pipe(pipe(w, f), g)`` is bit-identical to ``pipe(w, compose(f, g))``.
    """
    if not isinstance(wave, Wave):
        raise InvalidArgument(f"pipe expects a Wave on the left, got {type(wave).__name__}")
    chain = stage if isinstance(stage, Chain) else Chain([stage])
    return chain.bind(wave.fs).apply(wave, backend=backend)
