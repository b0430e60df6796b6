import { spawnSync } from "node:child_process";

/** Error carrying the wavepipe CLI's exit code and stderr diagnostics. */
export class CliError extends Error {
  constructor(
    message: string,
    readonly exitCode: number,
    readonly stderr: string,
  ) {
    super(message);
    this.name = "CliError";
  }
}

/**
 * Resolve the command that runs the wavepipe CLI. Override with the
 * WAVEPIPE_CLI environment variable (e.g. "wavepipe" for an installed
 * entry point); the default shells out to the Python module.
 */
export function cliCommand(): string[] {
  const override = process.env.WAVEPIPE_CLI;
  if (override && override.trim().length > 0) {
    return override.trim().split(/\s+/);
  }
  return ["python3", "-m", "wavepipe.cli"];
}

/** Run one wavepipe subcommand; throws CliError on a nonzero exit. */
export function runCli(args: string[]): string {
  const [program, ...prefix] = cliCommand();
  const result = spawnSync(program, [...prefix, ...args], {
    encoding: "utf8",
    maxBuffer: 64 * 1024 * 1024,
  });
  if (result.error) {
    throw result.error;
  }
  if (result.status !== 0) {
    const stderr = (result.stderr ?? "").trim();
    throw new CliError(
      `wavepipe exited with code ${result.status}: ${stderr}`,
      result.status ?? -1,
      stderr,
    );
  }
  return result.stdout ?? "";
}
