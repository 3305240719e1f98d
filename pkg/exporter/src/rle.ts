/** Column-major run-length encoding of binary masks.
 *
 * The pixel stream is read column by column, each column top to bottom.
 * Counts alternate between runs of zeros and runs of ones, always starting
 * with a zero run (which may be of length 0 when the first pixel is set).
 * This matches the uncompressed COCO convention used by the manifest
 * consumer.
 */

/** Encode a row-major binary bitmap (length height*width) to RLE counts. */
export function encodeRle(bitmap: Uint8Array, height: number, width: number): number[] {
  if (bitmap.length !== height * width) {
    throw new RangeError(
      `bitmap length ${bitmap.length} does not match ${height}x${width}`,
    );
  }
  const counts: number[] = [];
  let current = 0;
  let run = 0;
  for (let c = 0; c < width; c++) {
    for (let r = 0; r < height; r++) {
      const v = bitmap[r * width + c] ? 1 : 0;
      if (v === current) {
        run++;
      } else {
        counts.push(run);
        current = v;
        run = 1;
      }
    }
  }
  if (height * width > 0) {
    counts.push(run);
  }
  return counts;
}

/** Decode RLE counts back to a row-major binary bitmap. */
export function decodeRle(counts: number[], height: number, width: number): Uint8Array {
  const total = counts.reduce((a, b) => a + b, 0);
  if (total !== height * width) {
    throw new RangeError(
      `counts sum ${total} does not match ${height}x${width}`,
    );
  }
  const bitmap = new Uint8Array(height * width);
  let pos = 0;
  let value = 0;
  for (const count of counts) {
    if (count < 0 || !Number.isInteger(count)) {
      throw new RangeError(`invalid run length ${count}`);
    }
    if (value === 1) {
      for (let k = 0; k < count; k++) {
        const idx = pos + k;
        const c = Math.floor(idx / height);
        const r = idx % height;
        bitmap[r * width + c] = 1;
      }
    }
    pos += count;
    value ^= 1;
  }
  return bitmap;
}

/** Number of set pixels implied by the counts without decoding. */
export function rleArea(counts: number[]): number {
  let area = 0;
  for (let i = 1; i < counts.length; i += 2) {
    area += counts[i];
  }
  return area;
}
