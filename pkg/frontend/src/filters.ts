/**
 * Filter stages as chain-spec builders. No DSP happens here: every stage
 * serializes to the core's chain-spec grammar and is evaluated by the
 * wavepipe CLI, so results are bit-identical to driving the CLI by hand.
 */

export interface FilterStage {
  /** Chain-spec fragment for this stage, e.g. "butter(lp, order=4, fc=1000)". */
  toSpec(): string;
  /** Compose with further stages into a chain (left to right). */
  pipe(...stages: FilterStage[]): FilterChain;
}

function formatValue(value: number | string): string {
  if (typeof value === "number") {
    if (!Number.isFinite(value)) throw new Error(`non-finite argument: ${value}`);
    return String(value);
  }
  return value;
}

function renderSpec(name: string, positional: (number | string)[], kwargs: Record<string, number | string | undefined>): string {
  const parts = positional.map(formatValue);
  for (const [key, value] of Object.entries(kwargs)) {
    if (value !== undefined) parts.push(`${key}=${formatValue(value)}`);
  }
  return `${name}(${parts.join(", ")})`;
}

abstract class BaseStage implements FilterStage {
  abstract toSpec(): string;

  pipe(...stages: FilterStage[]): FilterChain {
    return new FilterChain([this, ...stages]);
  }
}

/** Ordered, flat sequence of stages; mirrors the core Chain semantics. */
export class FilterChain extends BaseStage {
  readonly stages: readonly FilterStage[];

  constructor(stages: FilterStage[]) {
    super();
    this.stages = stages.flatMap((s) => (s instanceof FilterChain ? [...s.stages] : [s]));
  }

  get length(): number {
    return this.stages.length;
  }

  override toSpec(): string {
    return this.stages.map((s) => s.toSpec()).join(" | ");
  }
}

export type PassKind = "lp" | "hp";

export class Butterworth extends BaseStage {
  constructor(
    readonly kind: PassKind,
    readonly order: number,
    readonly fc: number,
  ) {
    super();
  }

  toSpec(): string {
    return renderSpec("butter", [this.kind], { order: this.order, fc: this.fc });
  }
}

export class Chebyshev1 extends BaseStage {
  constructor(
    readonly kind: PassKind,
    readonly order: number,
    readonly fc: number,
    readonly rippleDb: number,
  ) {
    super();
  }

  toSpec(): string {
    return renderSpec("cheby1", [this.kind], {
      order: this.order,
      fc: this.fc,
      ripple_db: this.rippleDb,
    });
  }
}

export interface ShelfOptions {
  gainDb: number;
  q?: number;
}

export class HiShelving extends BaseStage {
  constructor(
    readonly fc: number,
    readonly options: ShelfOptions,
  ) {
    super();
  }

  toSpec(): string {
    return renderSpec("hishelf", [], { fc: this.fc, gain_db: this.options.gainDb, q: this.options.q });
  }
}

export class LoShelving extends BaseStage {
  constructor(
    readonly fc: number,
    readonly options: ShelfOptions,
  ) {
    super();
  }

  toSpec(): string {
    return renderSpec("loshelf", [], { fc: this.fc, gain_db: this.options.gainDb, q: this.options.q });
  }
}

export class Peaking extends BaseStage {
  constructor(
    readonly fc: number,
    readonly options: ShelfOptions,
  ) {
    super();
  }

  toSpec(): string {
    return renderSpec("peak", [], { fc: this.fc, gain_db: this.options.gainDb, q: this.options.q });
  }
}

export interface FirOptions {
  window?: "hamming" | "blackman" | "rect";
}

export class FirSinc extends BaseStage {
  constructor(
    readonly kind: PassKind | "bp",
    readonly numTaps: number,
    readonly fc: number | [number, number],
    readonly options: FirOptions = {},
  ) {
    super();
  }

  toSpec(): string {
    if (this.kind === "bp") {
      const [f1, f2] = this.fc as [number, number];
      return renderSpec("fir", [this.kind], {
        num_taps: this.numTaps,
        f1,
        f2,
        window: this.options.window,
      });
    }
    return renderSpec("fir", [this.kind], {
      num_taps: this.numTaps,
      fc: this.fc as number,
      window: this.options.window,
    });
  }
}
