/** Deterministic xorshift64* generator.
 *
 * This mirrors, bit for bit, the generator used by the Python side to
 * initialise toy model weights and to synthesise probe images, so bundles
 * exported here verify against the same probe protocol.  State is kept as
 * a BigInt and masked to 64 bits after every shift.
 */

const MASK64 = (1n << 64n) - 1n;
const MULTIPLIER = 0x2545f4914f6cdd1dn;
const ZERO_SEED_REPLACEMENT = 0x9e3779b97f4a7c15n;
const TWO_53 = 2 ** 53;

export class Xorshift64Star {
  private state: bigint;

  constructor(seed: number | bigint) {
    let s = BigInt(seed) & MASK64;
    if (s === 0n) {
      s = ZERO_SEED_REPLACEMENT;
    }
    this.state = s;
  }

  /** Next raw 64-bit output word. */
  nextU64(): bigint {
    let x = this.state;
    x ^= x >> 12n;
    x = (x ^ (x << 25n)) & MASK64;
    x ^= x >> 27n;
    this.state = x;
    return (x * MULTIPLIER) & MASK64;
  }

  /** Uniform double in [0, 1) from the top 53 bits. */
  uniform(): number {
    return Number(this.nextU64() >> 11n) / TWO_53;
  }

  /** Uniform double in [-1, 1). */
  uniformPm1(): number {
    return 2 * this.uniform() - 1;
  }

  /** Uniform byte in [0, 255] from the top 8 bits. */
  nextByte(): number {
    return Number(this.nextU64() >> 56n);
  }
}

/** Flat array of `count` values in [-1, 1), row-major consumption order. */
export function fillPm1(seed: number | bigint, count: number): Float64Array {
  const rng = new Xorshift64Star(seed);
  const out = new Float64Array(count);
  for (let i = 0; i < count; i++) {
    out[i] = rng.uniformPm1();
  }
  return out;
}

/** Deterministic RGB probe image, bytes drawn in (row, col, channel) order. */
export function probeImage(seed: number | bigint, height = 64, width = 64): Uint8Array {
  const rng = new Xorshift64Star(seed);
  const data = new Uint8Array(height * width * 3);
  for (let i = 0; i < data.length; i++) {
    data[i] = rng.nextByte();
  }
  return data;
}
