/** Deterministic segmenters that propose concept masks for an image.
 *
 * Two strategies are provided.  The color segmenter quantises RGB values
 * and extracts 4-connected components of uniform quantised color, which
 * suits synthetic and flat-shaded imagery.  The grid segmenter tiles the
 * image into a fixed lattice, a segmentation-free fallback that always
 * yields full coverage.  Both are pure functions of their inputs, so
 * exports are reproducible run to run.
 */

import { RgbImage } from "./png";

export interface Segment {
  /** Row-major binary bitmap, length height*width. */
  bitmap: Uint8Array;
  /** Number of set pixels. */
  area: number;
  /** Row-major index of the first set pixel, for deterministic tie-breaks. */
  firstIndex: number;
}

export interface ColorSegmenterOptions {
  /** Quantisation bucket width for each RGB channel. */
  quantStep?: number;
  /** Drop components smaller than this many pixels. */
  minArea?: number;
}

/** 4-connected components of uniform quantised color, largest first. */
export function colorSegments(
  image: RgbImage,
  options: ColorSegmenterOptions = {},
): Segment[] {
  const quantStep = options.quantStep ?? 32;
  const minArea = options.minArea ?? 64;
  if (!Number.isInteger(quantStep) || quantStep < 1 || quantStep > 256) {
    throw new RangeError(`quantStep must be an integer in [1, 256], got ${quantStep}`);
  }
  if (!Number.isInteger(minArea) || minArea < 1) {
    throw new RangeError(`minArea must be a positive integer, got ${minArea}`);
  }
  const { height, width, data } = image;
  const n = height * width;
  const keys = new Int32Array(n);
  for (let i = 0; i < n; i++) {
    const qr = Math.floor(data[i * 3] / quantStep);
    const qg = Math.floor(data[i * 3 + 1] / quantStep);
    const qb = Math.floor(data[i * 3 + 2] / quantStep);
    keys[i] = (qr << 16) | (qg << 8) | qb;
  }

  const labels = new Int32Array(n).fill(-1);
  const segments: Segment[] = [];
  const stack: number[] = [];
  let nextLabel = 0;
  for (let start = 0; start < n; start++) {
    if (labels[start] !== -1) {
      continue;
    }
    const key = keys[start];
    const bitmap = new Uint8Array(n);
    let area = 0;
    labels[start] = nextLabel;
    stack.push(start);
    while (stack.length > 0) {
      const idx = stack.pop() as number;
      bitmap[idx] = 1;
      area++;
      const r = Math.floor(idx / width);
      const c = idx % width;
      if (r > 0) visit(idx - width);
      if (r < height - 1) visit(idx + width);
      if (c > 0) visit(idx - 1);
      if (c < width - 1) visit(idx + 1);
    }
    nextLabel++;
    if (area >= minArea) {
      segments.push({ bitmap, area, firstIndex: start });
    }

    function visit(neighbor: number): void {
      if (labels[neighbor] === -1 && keys[neighbor] === key) {
        labels[neighbor] = nextLabel;
        stack.push(neighbor);
      }
    }
  }
  return sortSegments(segments);
}

/** Regular lattice of pointsPerSide x pointsPerSide tiles, largest first. */
export function gridSegments(image: RgbImage, pointsPerSide: number): Segment[] {
  if (!Number.isInteger(pointsPerSide) || pointsPerSide < 1) {
    throw new RangeError(
      `pointsPerSide must be a positive integer, got ${pointsPerSide}`,
    );
  }
  const { height, width } = image;
  if (pointsPerSide > height || pointsPerSide > width) {
    throw new RangeError(
      `pointsPerSide ${pointsPerSide} exceeds image size ${height}x${width}`,
    );
  }
  const segments: Segment[] = [];
  for (let tr = 0; tr < pointsPerSide; tr++) {
    for (let tc = 0; tc < pointsPerSide; tc++) {
      const r0 = Math.floor((height * tr) / pointsPerSide);
      const r1 = Math.floor((height * (tr + 1)) / pointsPerSide);
      const c0 = Math.floor((width * tc) / pointsPerSide);
      const c1 = Math.floor((width * (tc + 1)) / pointsPerSide);
      const bitmap = new Uint8Array(height * width);
      for (let r = r0; r < r1; r++) {
        for (let c = c0; c < c1; c++) {
          bitmap[r * width + c] = 1;
        }
      }
      segments.push({
        bitmap,
        area: (r1 - r0) * (c1 - c0),
        firstIndex: r0 * width + c0,
      });
    }
  }
  return sortSegments(segments);
}

/** Order by area descending, first pixel ascending on ties. */
function sortSegments(segments: Segment[]): Segment[] {
  return segments
    .slice()
    .sort((a, b) => (b.area - a.area) || (a.firstIndex - b.firstIndex));
}
