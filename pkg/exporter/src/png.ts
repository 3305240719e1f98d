/** PNG reading and writing for RGB images.
 *
 * Images are held as flat row-major RGB byte arrays; the alpha channel is
 * dropped on read and emitted as fully opaque on write.
 */

import * as fs from "node:fs";
import { PNG } from "pngjs";

export interface RgbImage {
  height: number;
  width: number;
  /** Row-major RGB bytes, length height*width*3. */
  data: Uint8Array;
}

export function readPng(path: string): RgbImage {
  const png = PNG.sync.read(fs.readFileSync(path));
  const { width, height } = png;
  const data = new Uint8Array(height * width * 3);
  for (let i = 0; i < height * width; i++) {
    data[i * 3] = png.data[i * 4];
    data[i * 3 + 1] = png.data[i * 4 + 1];
    data[i * 3 + 2] = png.data[i * 4 + 2];
  }
  return { height, width, data };
}

export function writePng(path: string, image: RgbImage): void {
  const { height, width, data } = image;
  if (data.length !== height * width * 3) {
    throw new RangeError(
      `image data length ${data.length} does not match ${height}x${width}x3`,
    );
  }
  const png = new PNG({ width, height });
  for (let i = 0; i < height * width; i++) {
    png.data[i * 4] = data[i * 3];
    png.data[i * 4 + 1] = data[i * 3 + 1];
    png.data[i * 4 + 2] = data[i * 3 + 2];
    png.data[i * 4 + 3] = 255;
  }
  fs.writeFileSync(path, PNG.sync.write(png));
}
