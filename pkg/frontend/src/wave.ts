import { randomBytes } from "node:crypto";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

import { runCli } from "./cli.js";
import { FilterChain, FilterStage } from "./filters.js";

export interface NoiseOptions {
  durationS: number;
  channels?: number;
  fs?: number;
  seed?: number;
}

export interface PipeOptions {
  backend?: "serial" | "parallel" | "auto";
  threads?: number;
}

let workDir: string | undefined;

function scratchFile(): string {
  if (!workDir) {
    workDir = fs.mkdtempSync(path.join(os.tmpdir(), "wavepipe-client-"));
  }
  return path.join(workDir, `${randomBytes(8).toString("hex")}.wav`);
}

/**
 * A signal handle backed by a WAV file. All processing is delegated to
 * the wavepipe CLI; this class never touches samples itself.
 *
 * Piping is lazy: stages accumulate on the handle and run as one
 * `wavepipe apply` invocation when the result is first needed, so
 * `w.pipe(f).pipe(g)` is byte-identical to `w.pipe(f, g)` and to the CLI
 * with the equivalent chain spec (no float32 re-quantization between
 * stages).
 */
export class Wave {
  private materialized?: string;

  private constructor(
    private readonly source: string,
    private readonly stages: readonly FilterStage[],
    private readonly options: PipeOptions,
  ) {
    if (stages.length === 0) {
      this.materialized = source;
    }
  }

  /** Wrap an existing WAV file; throws the native ENOENT error if absent. */
  static load(filePath: string): Wave {
    fs.accessSync(filePath, fs.constants.R_OK);
    return new Wave(path.resolve(filePath), [], {});
  }

  /** Deterministic white noise via `wavepipe noise` (same seed, same bytes). */
  static noise(options: NoiseOptions): Wave {
    const target = scratchFile();
    runCli([
      "noise",
      "--duration",
      String(options.durationS),
      "--channels",
      String(options.channels ?? 1),
      "--fs",
      String(options.fs ?? 44100),
      "--seed",
      String(options.seed ?? 0),
      "--out",
      target,
    ]);
    return new Wave(target, [], {});
  }

  /**
   * Extend the pending chain (left to right), returning a new handle.
   * Options (backend, threads) given on any call apply to the whole
   * materializing invocation; the most recent ones win.
   */
  pipe(first: FilterStage, ...rest: FilterStage[]): Wave;
  pipe(options: PipeOptions, first: FilterStage, ...rest: FilterStage[]): Wave;
  pipe(head: FilterStage | PipeOptions, ...rest: FilterStage[]): Wave {
    const isStage = typeof (head as FilterStage).toSpec === "function";
    const callOptions = isStage ? {} : (head as PipeOptions);
    const added = isStage ? [head as FilterStage, ...rest] : rest;
    const chain = new FilterChain(added);
    if (chain.length === 0) {
      throw new Error("pipe needs at least one filter stage");
    }
    return new Wave(this.source, [...this.stages, ...chain.stages], {
      ...this.options,
      ...callOptions,
    });
  }

  /** Path of the materialized WAV (runs the pending chain if needed). */
  get path(): string {
    return this.materialize();
  }

  /** Copy the materialized WAV to `destination`. */
  save(destination: string): void {
    fs.copyFileSync(this.materialize(), destination);
  }

  bytes(): Buffer {
    return fs.readFileSync(this.materialize());
  }

  private materialize(): string {
    if (this.materialized === undefined) {
      const target = scratchFile();
      const args: string[] = [];
      if (this.options.threads !== undefined) {
        args.push("--threads", String(this.options.threads));
      }
      args.push("apply", this.source, target, "--chain", new FilterChain([...this.stages]).toSpec());
      if (this.options.backend) {
        args.push("--backend", this.options.backend);
      }
      runCli(args);
      this.materialized = target;
    }
    return this.materialized;
  }
}

/** Functional form: pipe(wave, f, g) === wave.pipe(f, g). */
export function pipe(wave: Wave, first: FilterStage, ...rest: FilterStage[]): Wave {
  return wave.pipe(first, ...rest);
}
