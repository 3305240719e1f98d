import { describe, expect, it } from "vitest";
import { decodeRle, encodeRle, rleArea } from "../src/rle";
import { Xorshift64Star } from "../src/rng";

function bitmapFromRows(rows: number[][]): Uint8Array {
  return Uint8Array.from(rows.flat());
}

describe("encodeRle", () => {
  it("matches a hand-worked column-major example", () => {
    // Columns top to bottom: 110 000 000 011 -> runs 0,2,8,2.
    const bitmap = bitmapFromRows([
      [1, 0, 0, 0],
      [1, 0, 0, 1],
      [0, 0, 0, 1],
    ]);
    expect(encodeRle(bitmap, 3, 4)).toEqual([0, 2, 8, 2]);
  });

  it("starts with a zero-length zero run when pixel (0,0) is set", () => {
    const bitmap = bitmapFromRows([
      [1, 0],
      [0, 0],
    ]);
    expect(encodeRle(bitmap, 2, 2)).toEqual([0, 1, 3]);
  });

  it("encodes the empty mask as a single zero run", () => {
    expect(encodeRle(new Uint8Array(6), 2, 3)).toEqual([6]);
  });

  it("encodes the full mask as a zero run then everything", () => {
    expect(encodeRle(new Uint8Array(6).fill(1), 2, 3)).toEqual([0, 6]);
  });

  it("rejects bitmaps of the wrong length", () => {
    expect(() => encodeRle(new Uint8Array(5), 2, 3)).toThrow(RangeError);
  });
});

describe("decodeRle", () => {
  it("inverts the hand-worked example", () => {
    const expected = bitmapFromRows([
      [1, 0, 0, 0],
      [1, 0, 0, 1],
      [0, 0, 0, 1],
    ]);
    expect(decodeRle([0, 2, 8, 2], 3, 4)).toEqual(expected);
  });

  it("rejects counts that do not sum to the pixel count", () => {
    expect(() => decodeRle([0, 2, 3], 3, 4)).toThrow(RangeError);
  });

  it("rejects negative and fractional run lengths", () => {
    expect(() => decodeRle([-1, 7], 2, 3)).toThrow(RangeError);
    expect(() => decodeRle([0.5, 5.5], 2, 3)).toThrow(RangeError);
  });
});

describe("round trip", () => {
  it("decode(encode(x)) is the identity on random bitmaps", () => {
    const rng = new Xorshift64Star(2024);
    const shapes: Array<[number, number]> = [
      [1, 1], [1, 7], [7, 1], [5, 5], [16, 9], [33, 47],
    ];
    for (const [h, w] of shapes) {
      for (let trial = 0; trial < 4; trial++) {
        const bitmap = new Uint8Array(h * w);
        for (let i = 0; i < bitmap.length; i++) {
          bitmap[i] = rng.uniform() < 0.4 ? 1 : 0;
        }
        const counts = encodeRle(bitmap, h, w);
        expect(decodeRle(counts, h, w)).toEqual(bitmap);
      }
    }
  });

  it("alternating runs are strictly positive after the first", () => {
    const rng = new Xorshift64Star(77);
    const bitmap = new Uint8Array(20 * 13);
    for (let i = 0; i < bitmap.length; i++) {
      bitmap[i] = rng.uniform() < 0.5 ? 1 : 0;
    }
    const counts = encodeRle(bitmap, 20, 13);
    for (let i = 1; i < counts.length; i++) {
      expect(counts[i]).toBeGreaterThan(0);
    }
  });
});

describe("rleArea", () => {
  it("matches the decoded popcount", () => {
    const rng = new Xorshift64Star(31);
    const bitmap = new Uint8Array(11 * 17);
    for (let i = 0; i < bitmap.length; i++) {
      bitmap[i] = rng.uniform() < 0.3 ? 1 : 0;
    }
    const counts = encodeRle(bitmap, 11, 17);
    const popcount = bitmap.reduce((a, b) => a + b, 0);
    expect(rleArea(counts)).toBe(popcount);
  });
});
