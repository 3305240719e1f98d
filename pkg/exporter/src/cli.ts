#!/usr/bin/env node
/** Command-line interface.
 *
 * Exit codes follow the attribution engine's convention: 0 success,
 * 2 configuration error, 3 input error, 4 runtime failure.
 */

import { Command, CommanderError, InvalidArgumentError, Option } from "commander";

import { exportMasks, exportModel, SegmenterName } from "./jobs";
import { TOOL_VERSION } from "./version";

function integerOption(value: string): number {
  const v = Number(value);
  if (!Number.isInteger(v)) {
    throw new InvalidArgumentError(`expected an integer, got ${JSON.stringify(value)}`);
  }
  return v;
}

function buildProgram(): Command {
  const program = new Command();
  program
    .name("eac-export")
    .description("Export concept masks and model bundles for the eac attribution engine")
    .version(TOOL_VERSION)
    .exitOverride();

  program
    .command("masks")
    .description("segment an image and write a concept-mask manifest")
    .argument("<image>", "input PNG image")
    .requiredOption("-o, --out <dir>", "output directory")
    .addOption(
      new Option("--segmenter <name>", "segmentation strategy")
        .choices(["color", "grid"])
        .default("color"),
    )
    .option("--quant-step <n>", "color: RGB quantisation bucket width", integerOption, 32)
    .option("--min-area <n>", "color: minimum component area in pixels", integerOption, 64)
    .option("--points-per-side <n>", "grid: lattice resolution", integerOption, 4)
    .option("--max-masks <n>", "keep at most this many masks", integerOption)
    .option("--checkpoint <path>", "checkpoint file recorded (hashed) in provenance")
    .action((image: string, opts: Record<string, unknown>) => {
      const result = exportMasks({
        imagePath: image,
        outDir: opts.out as string,
        segmenter: opts.segmenter as SegmenterName,
        quantStep: opts.quantStep as number,
        minArea: opts.minArea as number,
        pointsPerSide: opts.pointsPerSide as number,
        maxMasks: opts.maxMasks as number | undefined,
        checkpoint: opts.checkpoint as string | undefined,
      });
      console.log(
        `wrote ${result.manifest.concepts.length} masks to ${result.manifestPath}`,
      );
    });

  program
    .command("model")
    .description("export a named model as a bundle directory")
    .argument("<name>", 'model identifier, e.g. "toy:7,4,5"')
    .requiredOption("-o, --out <dir>", "output directory")
    .option("--probes <n>", "number of probe records to embed", integerOption, 10)
    .action((name: string, opts: Record<string, unknown>) => {
      const result = exportModel({
        modelName: name,
        outDir: opts.out as string,
        probes: opts.probes as number,
      });
      console.log(
        `wrote bundle (${result.model.labels.length} classes, m=${result.model.m}) ` +
          `to ${result.bundleDir}`,
      );
    });

  return program;
}

/** Run the CLI on caller-style argv (no node/script prefix); returns exit code. */
export function runCli(argv: string[]): number {
  try {
    buildProgram().parse(argv, { from: "user" });
    return 0;
  } catch (err) {
    return reportError(err);
  }
}

function reportError(err: unknown): number {
  if (err instanceof CommanderError) {
    return err.exitCode === 0 ? 0 : 2;
  }
  const name = err instanceof Error ? err.name : "";
  const message = err instanceof Error ? err.message : String(err);
  process.stderr.write(`error: ${message}\n`);
  if (name === "ConfigError" || name === "UnsupportedArchitecture" || err instanceof RangeError) {
    return 2;
  }
  if (name === "CheckpointMissing" || name === "NoMasksFound" || name === "InputError") {
    return 3;
  }
  return 4;
}

if (require.main === module) {
  process.exit(runCli(process.argv.slice(2)));
}
