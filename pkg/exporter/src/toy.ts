/** Built-in toy classifier families and their forward pass.
 *
 * The `toy` family is a closed-form classifier: per-cell channel means over
 * a grid partition feed one linear layer.  Weights come from the portable
 * xorshift64* stream, so any implementation with the same seed produces the
 * same model.  The `toy_mlp` family stacks a second linear layer on top of
 * the first; it exists to exercise the unsupported-architecture guard,
 * since the bundle format requires a single terminal linear layer.
 */

import { UnsupportedArchitecture, ConfigError } from "./errors";
import { fillPm1 } from "./rng";
import { RgbImage } from "./png";

export interface ToySpec {
  family: "toy" | "toy_mlp";
  seed: number;
  grid: number;
  classes: number;
  /** Hidden width of the second linear layer, toy_mlp only. */
  hidden?: number;
}

export interface ToyModel {
  grid: number;
  /** Feature count, 3 * grid * grid. */
  m: number;
  /** Row-major [classes][m]. */
  weight: number[][];
  bias: number[];
  labels: string[];
}

/** Parse a model identifier like "toy:7,4,5" or "toy_mlp:7,4,5,16". */
export function parseModelSpec(name: string): ToySpec {
  const sep = name.indexOf(":");
  if (sep < 0) {
    throw new ConfigError(
      `model name ${JSON.stringify(name)} must look like "family:args"`,
    );
  }
  const family = name.slice(0, sep);
  const args = name.slice(sep + 1).split(",").map((part) => {
    const v = Number(part.trim());
    if (!Number.isInteger(v)) {
      throw new ConfigError(`model argument ${JSON.stringify(part)} is not an integer`);
    }
    return v;
  });
  if (family === "toy") {
    if (args.length !== 3) {
      throw new ConfigError('family "toy" takes exactly SEED,GRID,CLASSES');
    }
    const [seed, grid, classes] = args;
    validateShape(grid, classes);
    return { family, seed, grid, classes };
  }
  if (family === "toy_mlp") {
    if (args.length !== 4) {
      throw new ConfigError('family "toy_mlp" takes exactly SEED,GRID,CLASSES,HIDDEN');
    }
    const [seed, grid, classes, hidden] = args;
    validateShape(grid, classes);
    if (hidden < 1) {
      throw new ConfigError(`hidden width must be >= 1, got ${hidden}`);
    }
    return { family, seed, grid, classes, hidden };
  }
  throw new ConfigError(`unknown model family ${JSON.stringify(family)}`);
}

function validateShape(grid: number, classes: number): void {
  if (grid < 2) {
    throw new ConfigError(`grid must be >= 2, got ${grid}`);
  }
  if (classes < 2) {
    throw new ConfigError(`classes must be >= 2, got ${classes}`);
  }
}

/** Materialise the single-linear-layer toy classifier for a spec. */
export function buildToyModel(spec: ToySpec): ToyModel {
  if (spec.family !== "toy") {
    throw new UnsupportedArchitecture(
      `family ${JSON.stringify(spec.family)} ends in two stacked linear layers; ` +
        "the bundle format requires a single terminal linear layer",
    );
  }
  const { seed, grid, classes } = spec;
  const m = 3 * grid * grid;
  const draws = fillPm1(seed, classes * m + classes);
  const weight: number[][] = [];
  for (let row = 0; row < classes; row++) {
    weight.push(Array.from(draws.subarray(row * m, (row + 1) * m)));
  }
  const bias = Array.from(draws.subarray(classes * m));
  const labels = Array.from({ length: classes }, (_, i) => `class_${i}`);
  return { grid, m, weight, bias, labels };
}

/** Nearest-neighbor resize with floor index mapping (src = (dst * in) / out). */
function resizeNearest(image: RgbImage, height: number, width: number): RgbImage {
  if (image.height === height && image.width === width) {
    return image;
  }
  const data = new Uint8Array(height * width * 3);
  for (let r = 0; r < height; r++) {
    const sr = Math.floor((r * image.height) / height);
    for (let c = 0; c < width; c++) {
      const sc = Math.floor((c * image.width) / width);
      const src = (sr * image.width + sc) * 3;
      const dst = (r * width + c) * 3;
      data[dst] = image.data[src];
      data[dst + 1] = image.data[src + 1];
      data[dst + 2] = image.data[src + 2];
    }
  }
  return { height, width, data };
}

/** Per-cell channel means of the 64x64 [0,1]-scaled image, length m. */
export function gridMeanFeatures(model: ToyModel, image: RgbImage): Float64Array {
  const resized = resizeNearest(image, 64, 64);
  const g = model.grid;
  const bounds = (size: number, k: number) => Math.floor((size * k) / g);
  const out = new Float64Array(model.m);
  for (let r = 0; r < g; r++) {
    const r0 = bounds(resized.height, r);
    const r1 = bounds(resized.height, r + 1);
    for (let c = 0; c < g; c++) {
      const c0 = bounds(resized.width, c);
      const c1 = bounds(resized.width, c + 1);
      const sums = [0, 0, 0];
      for (let rr = r0; rr < r1; rr++) {
        for (let cc = c0; cc < c1; cc++) {
          const px = (rr * resized.width + cc) * 3;
          sums[0] += resized.data[px] / 255;
          sums[1] += resized.data[px + 1] / 255;
          sums[2] += resized.data[px + 2] / 255;
        }
      }
      const count = (r1 - r0) * (c1 - c0);
      const base = (r * g + c) * 3;
      out[base] = sums[0] / count;
      out[base + 1] = sums[1] / count;
      out[base + 2] = sums[2] / count;
    }
  }
  return out;
}

/** Raw class scores: weight @ features + bias. */
export function toyLogits(model: ToyModel, image: RgbImage): number[] {
  const f = gridMeanFeatures(model, image);
  return model.weight.map((row, i) => {
    let acc = 0;
    for (let j = 0; j < row.length; j++) {
      acc += row[j] * f[j];
    }
    return acc + model.bias[i];
  });
}
