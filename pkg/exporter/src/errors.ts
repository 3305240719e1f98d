/** Error types raised by the exporter.
 *
 * Each class carries a stable `name` so callers (and the CLI) can map
 * failures to exit codes without instanceof gymnastics across module
 * boundaries.
 */

/** A required checkpoint file does not exist on disk. */
export class CheckpointMissing extends Error {
  constructor(path: string) {
    super(`checkpoint not found: ${path}`);
    this.name = "CheckpointMissing";
  }
}

/** Segmentation produced zero usable masks for the input image. */
export class NoMasksFound extends Error {
  constructor(detail: string) {
    super(`no masks found: ${detail}`);
    this.name = "NoMasksFound";
  }
}

/** The requested model cannot be exported to the bundle format. */
export class UnsupportedArchitecture extends Error {
  constructor(detail: string) {
    super(`unsupported architecture: ${detail}`);
    this.name = "UnsupportedArchitecture";
  }
}

/** Bad user-supplied configuration (spec strings, option values). */
export class ConfigError extends Error {
  constructor(detail: string) {
    super(detail);
    this.name = "ConfigError";
  }
}

/** An input file is missing or unreadable. */
export class InputError extends Error {
  constructor(detail: string) {
    super(detail);
    this.name = "InputError";
  }
}
