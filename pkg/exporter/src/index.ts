export {
  CheckpointMissing,
  ConfigError,
  InputError,
  NoMasksFound,
  UnsupportedArchitecture,
} from "./errors";
export { exportMasks, exportModel } from "./jobs";
export type { MasksJob, MasksResult, ModelJob, ModelResult, SegmenterName } from "./jobs";
export { buildManifest, writeManifest } from "./manifest";
export type { Manifest, ManifestConcept } from "./manifest";
export { readPng, writePng } from "./png";
export type { RgbImage } from "./png";
export { decodeRle, encodeRle, rleArea } from "./rle";
export { fillPm1, probeImage, Xorshift64Star } from "./rng";
export { colorSegments, gridSegments } from "./segment";
export type { ColorSegmenterOptions, Segment } from "./segment";
export { buildToyModel, gridMeanFeatures, parseModelSpec, toyLogits } from "./toy";
export type { ToyModel, ToySpec } from "./toy";
export { runCli } from "./cli";
export { TOOL_VERSION } from "./version";
