/** The two export jobs: concept masks and model bundles.
 *
 * Each job writes its artifacts plus a `provenance.json` sidecar recording
 * the tool version and every knob that shaped the output (and the checkpoint
 * hash when one was supplied), so an export can be reproduced exactly.  No
 * timestamps are recorded; identical inputs give byte-identical outputs.
 */

import * as crypto from "node:crypto";
import * as fs from "node:fs";
import * as path from "node:path";

import { CheckpointMissing, InputError, NoMasksFound } from "./errors";
import { buildManifest, writeManifest, Manifest } from "./manifest";
import { readPng } from "./png";
import { probeImage } from "./rng";
import { colorSegments, gridSegments, Segment } from "./segment";
import { buildToyModel, parseModelSpec, toyLogits, ToyModel } from "./toy";
import { TOOL_VERSION } from "./version";

export type SegmenterName = "color" | "grid";

export interface MasksJob {
  imagePath: string;
  outDir: string;
  segmenter?: SegmenterName;
  /** Color segmenter: RGB quantisation bucket width. */
  quantStep?: number;
  /** Color segmenter: drop components below this pixel count. */
  minArea?: number;
  /** Grid segmenter: lattice resolution per side. */
  pointsPerSide?: number;
  /** Keep at most this many masks (largest first). */
  maxMasks?: number;
  /** Optional checkpoint whose hash is recorded in provenance. */
  checkpoint?: string;
}

export interface ModelJob {
  modelName: string;
  outDir: string;
  /** Number of probe records to embed, seeds 1..probes. */
  probes?: number;
}

export interface MasksResult {
  manifestPath: string;
  manifest: Manifest;
}

export interface ModelResult {
  bundleDir: string;
  model: ToyModel;
}

/** Segment an image and write masks.json + provenance.json into outDir. */
export function exportMasks(job: MasksJob): MasksResult {
  const segmenter = job.segmenter ?? "color";
  const quantStep = job.quantStep ?? 32;
  const minArea = job.minArea ?? 64;
  const pointsPerSide = job.pointsPerSide ?? 4;

  let checkpointSha256: string | null = null;
  if (job.checkpoint !== undefined) {
    if (!fs.existsSync(job.checkpoint) || !fs.statSync(job.checkpoint).isFile()) {
      throw new CheckpointMissing(job.checkpoint);
    }
    checkpointSha256 = crypto
      .createHash("sha256")
      .update(fs.readFileSync(job.checkpoint))
      .digest("hex");
  }

  let image;
  try {
    image = readPng(job.imagePath);
  } catch (err) {
    const detail = err instanceof Error ? err.message : String(err);
    throw new InputError(`cannot read image ${job.imagePath}: ${detail}`);
  }
  let segments: Segment[];
  if (segmenter === "color") {
    segments = colorSegments(image, { quantStep, minArea });
  } else {
    segments = gridSegments(image, pointsPerSide);
  }
  if (job.maxMasks !== undefined) {
    if (!Number.isInteger(job.maxMasks) || job.maxMasks < 1) {
      throw new RangeError(`maxMasks must be a positive integer, got ${job.maxMasks}`);
    }
    segments = segments.slice(0, job.maxMasks);
  }
  if (segments.length === 0) {
    throw new NoMasksFound(
      `image ${job.imagePath} produced no segments of at least ${minArea} pixels`,
    );
  }

  const manifest = buildManifest(
    segments,
    image.height,
    image.width,
    path.basename(job.imagePath),
  );
  fs.mkdirSync(job.outDir, { recursive: true });
  const manifestPath = path.join(job.outDir, "masks.json");
  writeManifest(manifest, manifestPath);
  writeProvenance(path.join(job.outDir, "provenance.json"), {
    tool: "eac-export",
    version: TOOL_VERSION,
    kind: "masks",
    image: path.basename(job.imagePath),
    segmenter,
    thresholds:
      segmenter === "color"
        ? { quant_step: quantStep, min_area: minArea }
        : { points_per_side: pointsPerSide },
    max_masks: job.maxMasks ?? null,
    checkpoint_sha256: checkpointSha256,
    num_masks: manifest.concepts.length,
  });
  return { manifestPath, manifest };
}

/** Export a named model as a bundle directory with embedded probe records. */
export function exportModel(job: ModelJob): ModelResult {
  const probes = job.probes ?? 10;
  if (!Number.isInteger(probes) || probes < 1) {
    throw new RangeError(`probes must be a positive integer, got ${probes}`);
  }
  const spec = parseModelSpec(job.modelName);
  const model = buildToyModel(spec);

  fs.mkdirSync(job.outDir, { recursive: true });
  writeJson(path.join(job.outDir, "builtin.json"), {
    backbone: "grid_mean",
    grid: model.grid,
  });
  writeJson(path.join(job.outDir, "fc.json"), {
    weight: model.weight,
    bias: model.bias,
    labels: model.labels,
  });
  writeJson(path.join(job.outDir, "preprocess.json"), {
    resize: [64, 64],
    mean: [0, 0, 0],
    std: [1, 1, 1],
  });
  const records = [];
  for (let seed = 1; seed <= probes; seed++) {
    const image = { height: 64, width: 64, data: probeImage(seed) };
    records.push({ seed, height: 64, width: 64, logits: toyLogits(model, image) });
  }
  writeJson(path.join(job.outDir, "probe.json"), records);
  writeProvenance(path.join(job.outDir, "provenance.json"), {
    tool: "eac-export",
    version: TOOL_VERSION,
    kind: "model",
    model: job.modelName,
    probes,
  });
  return { bundleDir: job.outDir, model };
}

function writeJson(filePath: string, value: unknown): void {
  fs.writeFileSync(filePath, JSON.stringify(value) + "\n");
}

function writeProvenance(filePath: string, value: unknown): void {
  fs.writeFileSync(filePath, JSON.stringify(value, null, 2) + "\n");
}
