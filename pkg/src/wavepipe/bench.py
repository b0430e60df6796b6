"""Benchmark harness: timed filter application over a duration x channels
grid, plus the interface-overhead comparison.

Protocol per grid cell: generate the white-noise workload and design the
filter outside the timed region, run one untimed warm-up (also absorbs
JIT compilation), then time `repeats` applications of the bound filter to
the pre-built wave and record mean/std/min wall time. Cells run strictly
sequentially so they cannot contaminate each other.

Backend ids: "serial" / "parallel" run the compiled kernels;
"serial-nojit" / "parallel-nojit" run the numpy/Python fallback path, so
one grid can compare both engines.
"""

from __future__ import annotations

import gc
import hashlib
import platform
import sys
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import engine
from .chain import Chain, compose, pipe
from .design import design_butterworth, design_chebyshev1, design_fir
from .errors import InvalidArgument
from .wave import Wave, white_noise

__all__ = [
    "BenchPoint",
    "BenchTable",
    "BACKEND_IDS",
    "DEFAULT_DURATIONS",
    "DEFAULT_CHANNELS",
    "INTERFACE_STYLES",
    "run_filter_grid",
    "run_interface_bench",
    "emit_table",
    "capture_environment",
    "bench_iir_filter",
    "bench_fir_filter",
    "bench_chain_stages",
]

DEFAULT_DURATIONS = (5.0, 60.0, 180.0, 300.0, 600.0)
DEFAULT_CHANNELS = (1, 2, 4, 8, 12)
DEFAULT_REPEATS = 50
DEFAULT_FS = 44100
DEFAULT_SEED = 42

BACKEND_IDS = ("serial", "parallel", "serial-nojit", "parallel-nojit")
INTERFACE_STYLES = ("pipe", "chain-object", "per-stage-calls")

CSV_HEADER = "duration_s,channels,backend,filter_kind,repeats,mean_s,std_s,min_s"


@dataclass(frozen=True)
class BenchPoint:
    """One timed grid cell."""

    duration_s: float
    channels: int
    backend: str
    filter_kind: str
    repeats: int
    mean_s: float
    std_s: float
    min_s: float
    output_digest: Optional[str] = None
    error: Optional[str] = None


@dataclass
class BenchTable:
    points: list[BenchPoint] = field(default_factory=list)
    environment: dict = field(default_factory=dict)


def bench_iir_filter(fs: int):
    """Pinned IIR workload filter: Butterworth lowpass, order 8, fc 2 kHz."""
    return design_butterworth("lowpass", 8, 2000.0, fs)


def bench_fir_filter(fs: int):
    """Pinned FIR workload filter: 257-tap hamming lowpass, fc 2 kHz."""
    return design_fir("lowpass", 257, 2000.0, "hamming", fs)


def bench_chain_stages():
    """The 4-stage interface-comparison chain: 2 Butterworth + 2 Chebyshev I."""
    return (
        design_butterworth("lowpass", 4, 1000.0),
        design_butterworth("lowpass", 4, 1200.0),
        design_chebyshev1("lowpass", 4, 1.0, 2000.0),
        design_chebyshev1("lowpass", 4, 1.0, 2400.0),
    )


def capture_environment() -> dict:
    env = {
        "cpu": _cpu_model(),
        "cpu_count": engine.max_threads(),
        "threads": engine.get_num_threads(),
        "python": sys.version.split()[0],
        "numpy": np.__version__,
        "platform": platform.platform(),
        "jit_available": engine.jit_available(),
        "jit_enabled": engine.jit_enabled(),
    }
    if engine.jit_available():
        import numba

        env["numba"] = numba.__version__
    return env


def _cpu_model() -> str:
    try:
        with open("/proc/cpuinfo") as fh:
            for line in fh:
                if line.lower().startswith("model name"):
                    return line.split(":", 1)[1].strip()
    except OSError:
        pass
    return platform.processor() or "unknown"


def _resolve_backend_id(backend_id: str) -> tuple[str, bool]:
    if backend_id not in BACKEND_IDS:
        raise InvalidArgument(f"backend id must be one of {BACKEND_IDS}, got {backend_id!r}")
    base, _, suffix = backend_id.partition("-")
    return base, suffix != "nojit"


def _time_repeats(run, repeats: int) -> tuple[float, float, float]:
    times = np.empty(repeats)
    for i in range(repeats):
        start = time.perf_counter()
        run()
        times[i] = time.perf_counter() - start
    return float(times.mean()), float(times.std()), float(times.min())


def _digest(wave: Wave) -> str:
    return hashlib.sha256(wave.samples.tobytes()).hexdigest()


def run_filter_grid(
    durations: Sequence[float] = DEFAULT_DURATIONS,
    channels: Sequence[int] = DEFAULT_CHANNELS,
    repeats: int = DEFAULT_REPEATS,
    filter_kind: str = "iir",
    backends: Sequence[str] = ("serial", "parallel"),
    fs: int = DEFAULT_FS,
    seed: int = DEFAULT_SEED,
) -> BenchTable:
    """Time filter application over the full duration x channels x backend grid.

    Only the apply call sits inside the timed region; workload generation
    and coefficient design happen outside it. One untimed warm-up run per
    cell. A cell that runs out of memory is recorded with NaN timings and
    an error note instead of aborting the grid.
    """
    if repeats < 1:
        raise InvalidArgument(f"repeats must be >= 1, got {repeats}")
    if filter_kind not in ("iir", "fir"):
        raise InvalidArgument(f"filter_kind must be 'iir' or 'fir', got {filter_kind!r}")
    table = BenchTable(environment=capture_environment())
    design = bench_iir_filter if filter_kind == "iir" else bench_fir_filter
    filt = design(fs)
    for duration in durations:
        for channel_count in channels:
            try:
                wave = white_noise(duration, channel_count, fs, seed)
            except MemoryError:
                for backend_id in backends:
                    table.points.append(
                        _oom_point(duration, channel_count, backend_id, filter_kind, repeats)
                    )
                continue
            for backend_id in backends:
                table.points.append(
                    _run_cell(filt, wave, duration, backend_id, filter_kind, repeats)
                )
            del wave
    return table


def _run_cell(filt, wave, duration, backend_id, filter_kind, repeats) -> BenchPoint:
    backend, use_jit = _resolve_backend_id(backend_id)
    previous = engine.jit_enabled()
    try:
        engine.set_jit_enabled(use_jit and engine.jit_available())
        run = lambda: filt.apply(wave, backend=backend)  # noqa: E731 - the timed closure
        out = run()  # warm-up, untimed
        digest = _digest(out)
        del out
        mean_s, std_s, min_s = _time_repeats(run, repeats)
    except MemoryError:
        return _oom_point(duration, wave.channels, backend_id, filter_kind, repeats)
    finally:
        engine.set_jit_enabled(previous)
    return BenchPoint(
        duration_s=float(duration),
        channels=wave.channels,
        backend=backend_id,
        filter_kind=filter_kind,
        repeats=repeats,
        mean_s=mean_s,
        std_s=std_s,
        min_s=min_s,
        output_digest=digest,
    )


def _oom_point(duration, channel_count, backend_id, filter_kind, repeats) -> BenchPoint:
    return BenchPoint(
        duration_s=float(duration),
        channels=int(channel_count),
        backend=backend_id,
        filter_kind=filter_kind,
        repeats=repeats,
        mean_s=float("nan"),
        std_s=float("nan"),
        min_s=float("nan"),
        error="out of memory; cell skipped",
    )


def run_interface_bench(
    repeats: int = DEFAULT_REPEATS,
    fs: int = DEFAULT_FS,
    seed: int = DEFAULT_SEED,
    duration_s: float = 120.0,
    channels: int = 8,
) -> BenchTable:
    """Compare call styles over one fixed workload and one fixed 4-stage chain.

    Styles: (a) pipe over an unbound chain (lazy binding inside the timed
    region), (b) a pre-bound composed Chain, (c) explicit per-stage apply
    calls. All three outputs are asserted bit-identical before any timing
    is reported.
    """
    if repeats < 1:
        raise InvalidArgument(f"repeats must be >= 1, got {repeats}")
    wave = white_noise(duration_s, channels, fs, seed)

    def unbound_chain() -> Chain:
        stages = bench_chain_stages()
        return compose(compose(compose(stages[0], stages[1]), stages[2]), stages[3])

    bound = unbound_chain().bind(fs)
    bound_stages = bound.stages

    def style_pipe():
        return pipe(wave, unbound_chain())

    def style_chain_object():
        return bound.apply(wave)

    def style_per_stage():
        out = wave
        for stage in bound_stages:
            out = stage.apply(out)
        return out

    styles = {
        "pipe": style_pipe,
        "chain-object": style_chain_object,
        "per-stage-calls": style_per_stage,
    }

    digests = {name: _digest(run()) for name, run in styles.items()}  # warm-up + equality check
    if len(set(digests.values())) != 1:
        raise AssertionError(f"interface styles disagree: {digests}")

    table = BenchTable(environment=capture_environment())
    table.environment["workload"] = f"white_noise({duration_s} s, {channels} ch, {fs} Hz, seed={seed})"
    # interleave repeats round-robin so slow machine drift lands on every
    # style's mean equally instead of skewing whole blocks
    gc.collect()
    times = {name: np.empty(repeats) for name in styles}
    for i in range(repeats):
        for name, run in styles.items():
            start = time.perf_counter()
            run()
            times[name][i] = time.perf_counter() - start
    for name in styles:
        table.points.append(
            BenchPoint(
                duration_s=float(duration_s),
                channels=channels,
                backend=name,
                filter_kind="iir",
                repeats=repeats,
                mean_s=float(times[name].mean()),
                std_s=float(times[name].std()),
                min_s=float(times[name].min()),
                output_digest=digests[name],
            )
        )
    return table


def emit_table(table: BenchTable, format: str = "csv") -> str:
    """Render a BenchTable as csv (pinned schema) or markdown (grid layout)."""
    if format == "csv":
        lines = [CSV_HEADER]
        for p in table.points:
            lines.append(
                f"{p.duration_s:g},{p.channels},{p.backend},{p.filter_kind},"
                f"{p.repeats},{p.mean_s:.6f},{p.std_s:.6f},{p.min_s:.6f}"
            )
        return "\n".join(lines) + "\n"
    if format == "markdown":
        return _emit_markdown(table)
    raise InvalidArgument(f"format must be 'csv' or 'markdown', got {format!r}")


def _emit_markdown(table: BenchTable) -> str:
    backends = []
    for p in table.points:
        if p.backend not in backends:
            backends.append(p.backend)
    blocks = []
    for kind in ("iir", "fir"):
        rows = {}
        for p in table.points:
            if p.filter_kind != kind:
                continue
            rows.setdefault((p.duration_s, p.channels), {})[p.backend] = p
        if not rows:
            continue
        header = "| Time (s) | Channels | " + " | ".join(backends) + " |"
        rule = "|" + "---|" * (2 + len(backends))
        lines = [f"### {kind.upper()} mean execution time (s)", "", header, rule]
        for (duration, channel_count) in sorted(rows):
            cells = []
            for backend in backends:
                point = rows[(duration, channel_count)].get(backend)
                if point is None:
                    cells.append("-")
                elif point.error:
                    cells.append("skipped")
                else:
                    cells.append(f"{point.mean_s:.6f}")
            lines.append(f"| {duration:g} | {channel_count} | " + " | ".join(cells) + " |")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"
