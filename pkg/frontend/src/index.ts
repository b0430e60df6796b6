export { CliError, cliCommand, runCli } from "./cli.js";
export {
  Butterworth,
  Chebyshev1,
  FilterChain,
  FirSinc,
  HiShelving,
  LoShelving,
  Peaking,
} from "./filters.js";
export type { FilterStage, FirOptions, PassKind, ShelfOptions } from "./filters.js";
export { Wave, pipe } from "./wave.js";
export type { NoiseOptions, PipeOptions } from "./wave.js";
