/** Concept manifest assembly and serialisation.
 *
 * The manifest is the file contract between this exporter and the
 * attribution engine: an image header plus a list of concepts, each with a
 * dense id (equal to its list index) and an RLE-encoded mask.
 */

import * as fs from "node:fs";
import * as path from "node:path";
import { encodeRle } from "./rle";
import { Segment } from "./segment";

export interface ManifestConcept {
  id: number;
  name: string;
  rle: { size: [number, number]; counts: number[] };
}

export interface Manifest {
  image: { width: number; height: number; path?: string };
  concepts: ManifestConcept[];
}

/** Build a manifest from segments already sorted into final id order. */
export function buildManifest(
  segments: Segment[],
  height: number,
  width: number,
  imagePath?: string,
): Manifest {
  const concepts = segments.map((segment, id) => ({
    id,
    name: `segment_${id}`,
    rle: {
      size: [height, width] as [number, number],
      counts: encodeRle(segment.bitmap, height, width),
    },
  }));
  const image: Manifest["image"] = { width, height };
  if (imagePath !== undefined) {
    image.path = imagePath;
  }
  return { image, concepts };
}

/** Write a manifest as pretty-printed JSON with a trailing newline. */
export function writeManifest(manifest: Manifest, outPath: string): void {
  fs.mkdirSync(path.dirname(outPath), { recursive: true });
  fs.writeFileSync(outPath, JSON.stringify(manifest, null, 2) + "\n");
}
