"""Command-line front end.

Subcommands::

    apply      filter a WAV file through a chain spec
    response   dump a chain's frequency response as CSV
    coeffs     dump a chain's coefficients as JSON
    bench      run the timing grid or the interface comparison
    noise      write a deterministic white-noise WAV

Exit codes: 0 success, 1 chain-spec parse error, 2 I/O error, 3 filter
error (invalid parameters, cutoff vs Nyquist, sampling-rate conflicts).
Diagnostics go to stderr; data goes to the output file or stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import __version__, bench, engine
from .chainspec import parse_chain_spec
from .design import FirFilter, IirFilter
from .errors import ChainSpecError, InvalidArgument, WavepipeError
from .wave import white_noise
from .wavio import ENCODINGS, load_wav, save_wav

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_IO = 2
EXIT_FILTER = 3


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.threads is not None:
        engine.set_num_threads(args.threads)
    try:
        return args.func(args)
    except ChainSpecError as exc:
        print(f"error: chain spec: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except WavepipeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FILTER
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavepipe",
        description="Multichannel audio filtering with composable filter chains.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--threads", type=int, default=None, help="worker threads for parallel backends (default: all)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_apply = sub.add_parser("apply", help="filter a WAV file through a chain")
    p_apply.add_argument("input", help="input WAV path")
    p_apply.add_argument("output", help="output WAV path (float32)")
    p_apply.add_argument("--chain", required=True, help="chain spec, e.g. 'butter(lp, order=4, fc=1000)'")
    p_apply.add_argument("--backend", choices=engine.BACKENDS, default="auto")
    p_apply.add_argument("--verbose", action="store_true", help="per-stage timing on stderr")
    p_apply.set_defaults(func=cmd_apply)

    p_resp = sub.add_parser("response", help="dump chain frequency response as CSV")
    p_resp.add_argument("--chain", required=True)
    p_resp.add_argument("--fs", type=int, required=True, help="sampling rate to bind the chain to")
    p_resp.add_argument("--points", type=int, default=512, help="log-spaced frequencies in [1, fs/2]")
    p_resp.add_argument("--out", default="-", help="output path, '-' for stdout")
    p_resp.set_defaults(func=cmd_response)

    p_coeffs = sub.add_parser("coeffs", help="dump chain coefficients as JSON")
    p_coeffs.add_argument("--chain", required=True)
    p_coeffs.add_argument("--fs", type=int, required=True)
    p_coeffs.add_argument("--out", default="-")
    p_coeffs.set_defaults(func=cmd_coeffs)

    p_bench = sub.add_parser("bench", help="run the benchmark harness")
    p_bench.add_argument("--mode", choices=("filters", "interfaces"), default="filters")
    p_bench.add_argument(
        "--durations",
        default=None,
        help="comma-separated seconds (filters default 5,60,180,300,600; interfaces default 120)",
    )
    p_bench.add_argument("--channels", default="1,2,4,8,12", help="comma-separated channel counts")
    p_bench.add_argument("--repeats", type=int, default=bench.DEFAULT_REPEATS)
    p_bench.add_argument("--kinds", default="iir,fir", help="filter kinds for --mode filters")
    p_bench.add_argument(
        "--backends",
        default="serial,parallel",
        help=f"comma-separated backend ids from {', '.join(bench.BACKEND_IDS)}",
    )
    p_bench.add_argument("--fs", type=int, default=bench.DEFAULT_FS)
    p_bench.add_argument("--seed", type=int, default=bench.DEFAULT_SEED)
    p_bench.add_argument("--format", choices=("csv", "markdown"), default="csv")
    p_bench.add_argument("--out", default="-")
    p_bench.set_defaults(func=cmd_bench)

    p_noise = sub.add_parser("noise", help="write deterministic white noise as WAV")
    p_noise.add_argument("--duration", type=float, required=True, help="seconds")
    p_noise.add_argument("--channels", type=int, default=1)
    p_noise.add_argument("--fs", type=int, default=44100)
    p_noise.add_argument("--seed", type=int, default=0)
    p_noise.add_argument("--encoding", choices=sorted(ENCODINGS), default="float32")
    p_noise.add_argument("--out", required=True)
    p_noise.set_defaults(func=cmd_noise)

    return parser


def cmd_apply(args) -> int:
    wave = load_wav(args.input)
    chain = parse_chain_spec(args.chain)
    bound = chain.bind(wave.fs)
    out = wave
    for index, stage in enumerate(bound.stages):
        started = time.perf_counter()
        out = stage.apply(out, backend=args.backend)
        if args.verbose:
            elapsed = time.perf_counter() - started
            print(f"stage {index + 1}/{len(bound.stages)} {stage!r}: {elapsed:.6f} s", file=sys.stderr)
    clipped = save_wav(out, args.output, "float32")
    if clipped:
        print(f"note: {clipped} samples clipped", file=sys.stderr)
    return EXIT_OK


def cmd_response(args) -> int:
    chain = parse_chain_spec(args.chain)
    if args.points < 1:
        raise InvalidArgument(f"--points must be >= 1, got {args.points}")
    bound = chain.bind(args.fs)
    freqs = np.geomspace(1.0, args.fs / 2.0, args.points)
    response = bound.frequency_response(freqs)
    lines = ["freq_hz,magnitude_db,phase_rad"]
    with np.errstate(divide="ignore"):  # a true transfer-function zero is -inf dB
        magnitude_db = 20.0 * np.log10(np.abs(response))
    phase = np.angle(response)
    for f, m, p in zip(freqs, magnitude_db, phase):
        lines.append(f"{f:.6f},{m:.6f},{p:.6f}")
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_coeffs(args) -> int:
    chain = parse_chain_spec(args.chain)
    bound = chain.bind(args.fs)
    stages = []
    for stage in bound.stages:
        if isinstance(stage, IirFilter):
            stages.append(
                {
                    "type": "iir",
                    "family": stage.spec.family if stage.spec else "raw",
                    "overall_gain": stage.overall_gain,
                    "sections": [
                        {"b": [s.b0, s.b1, s.b2], "a": [1.0, s.a1, s.a2]} for s in stage.sections
                    ],
                }
            )
        elif isinstance(stage, FirFilter):
            stages.append({"type": "fir", "taps": stage.taps.tolist()})
        else:
            stages.append({"type": type(stage).__name__})
    _write_text(args.out, json.dumps({"fs": args.fs, "stages": stages}, indent=2) + "\n")
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.mode == "interfaces":
        duration = _parse_floats(args.durations)[0] if args.durations else 120.0
        table = bench.run_interface_bench(
            repeats=args.repeats, fs=args.fs, seed=args.seed, duration_s=duration
        )
        _write_text(args.out, bench.emit_table(table, args.format))
        return EXIT_OK

    durations = _parse_floats(args.durations) if args.durations else list(bench.DEFAULT_DURATIONS)
    channels = [int(c) for c in args.channels.split(",") if c]
    backends = [b.strip() for b in args.backends.split(",") if b.strip()]
    kinds = [k.strip() for k in args.kinds.split(",") if k.strip()]
    tables = []
    for kind in kinds:
        tables.append(
            bench.run_filter_grid(
                durations=durations,
                channels=channels,
                repeats=args.repeats,
                filter_kind=kind,
                backends=backends,
                fs=args.fs,
                seed=args.seed,
            )
        )
    merged = bench.BenchTable(environment=tables[0].environment if tables else {})
    for t in tables:
        merged.points.extend(t.points)
    _write_text(args.out, bench.emit_table(merged, args.format))
    return EXIT_OK


def cmd_noise(args) -> int:
    wave = white_noise(args.duration, args.channels, args.fs, args.seed)
    clipped = save_wav(wave, args.out, args.encoding)
    if clipped:
        print(f"note: {clipped} samples clipped", file=sys.stderr)
    return EXIT_OK


def _parse_floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v]


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


if __name__ == "__main__":
    sys.exit(main())
