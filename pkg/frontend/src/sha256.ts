/**
 * Incremental SHA-256.
 *
 * WebCrypto's `crypto.subtle.digest` needs the whole message in memory, so
 * it cannot hash a large file chunk by chunk; this implementation accepts
 * arbitrary-length updates and keeps only a 64-byte carry between them.
 * Message lengths up to 2^53 - 1 bytes are split exactly into the two
 * 32-bit words of the length trailer.
 */

const K = new Uint32Array([
  0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4, 0xab1c5ed5,
  0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174,
  0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
  0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967,
  0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
  0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
  0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
  0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2,
]);

export class Sha256 {
  private h = new Uint32Array([
    0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
    0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19,
  ]);
  private tail = new Uint8Array(64);
  private tailLen = 0;
  private totalBytes = 0;
  private w = new Uint32Array(64);
  private finished = false;

  update(chunk: Uint8Array): this {
    if (this.finished) {
      throw new Error("update() after digest()");
    }
    this.totalBytes += chunk.length;
    let offset = 0;
    if (this.tailLen > 0) {
      const take = Math.min(64 - this.tailLen, chunk.length);
      this.tail.set(chunk.subarray(0, take), this.tailLen);
      this.tailLen += take;
      offset = take;
      if (this.tailLen === 64) {
        this.compress(this.tail, 0);
        this.tailLen = 0;
      }
    }
    while (offset + 64 <= chunk.length) {
      this.compress(chunk, offset);
      offset += 64;
    }
    if (offset < chunk.length) {
      this.tail.set(chunk.subarray(offset));
      this.tailLen = chunk.length - offset;
    }
    return this;
  }

  digest(): Uint8Array {
    if (!this.finished) {
      // 0x80, zero padding to 56 mod 64, then the bit length big-endian.
      const padded = new Uint8Array(this.tailLen < 56 ? 64 : 128);
      padded.set(this.tail.subarray(0, this.tailLen));
      padded[this.tailLen] = 0x80;
      const view = new DataView(padded.buffer);
      view.setUint32(padded.length - 8, Math.floor(this.totalBytes / 0x20000000));
      view.setUint32(padded.length - 4, (this.totalBytes % 0x20000000) * 8);
      this.compress(padded, 0);
      if (padded.length === 128) {
        this.compress(padded, 64);
      }
      this.finished = true;
    }
    const out = new Uint8Array(32);
    const view = new DataView(out.buffer);
    for (let i = 0; i < 8; i++) {
      view.setUint32(4 * i, this.h[i]!);
    }
    return out;
  }

  hex(): string {
    return bytesToHex(this.digest());
  }

  private compress(block: Uint8Array, offset: number): void {
    const w = this.w;
    for (let i = 0; i < 16; i++) {
      const o = offset + 4 * i;
      w[i] = (block[o]! << 24) | (block[o + 1]! << 16) | (block[o + 2]! << 8) | block[o + 3]!;
    }
    for (let i = 16; i < 64; i++) {
      const x = w[i - 15]!;
      const y = w[i - 2]!;
      const s0 = ((x >>> 7) | (x << 25)) ^ ((x >>> 18) | (x << 14)) ^ (x >>> 3);
      const s1 = ((y >>> 17) | (y << 15)) ^ ((y >>> 19) | (y << 13)) ^ (y >>> 10);
      w[i] = (w[i - 16]! + s0 + w[i - 7]! + s1) | 0;
    }

    let a = this.h[0]!;
    let b = this.h[1]!;
    let c = this.h[2]!;
    let d = this.h[3]!;
    let e = this.h[4]!;
    let f = this.h[5]!;
    let g = this.h[6]!;
    let h = this.h[7]!;

    for (let i = 0; i < 64; i++) {
      const s1 = ((e >>> 6) | (e << 26)) ^ ((e >>> 11) | (e << 21)) ^ ((e >>> 25) | (e << 7));
      const ch = (e & f) ^ (~e & g);
      const t1 = (h + s1 + ch + K[i]! + w[i]!) | 0;
      const s0 = ((a >>> 2) | (a << 30)) ^ ((a >>> 13) | (a << 19)) ^ ((a >>> 22) | (a << 10));
      const maj = (a & b) ^ (a & c) ^ (b & c);
      const t2 = (s0 + maj) | 0;
      h = g;
      g = f;
      f = e;
      e = (d + t1) | 0;
      d = c;
      c = b;
      b = a;
      a = (t1 + t2) | 0;
    }

    this.h[0] = (this.h[0]! + a) | 0;
    this.h[1] = (this.h[1]! + b) | 0;
    this.h[2] = (this.h[2]! + c) | 0;
    this.h[3] = (this.h[3]! + d) | 0;
    this.h[4] = (this.h[4]! + e) | 0;
    this.h[5] = (this.h[5]! + f) | 0;
    this.h[6] = (this.h[6]! + g) | 0;
    this.h[7] = (this.h[7]! + h) | 0;
  }
}

export function bytesToHex(bytes: Uint8Array): string {
  return Array.from(bytes)
    .map((b) => b.toString(16).padStart(2, "0"))
    .join("");
}

export function sha256Hex(data: Uint8Array): string {
  return new Sha256().update(data).hex();
}

/** Hash a stream chunk by chunk; memory use is one chunk plus 64 bytes. */
export async function hashStream(stream: ReadableStream<Uint8Array>): Promise<string> {
  const reader = stream.getReader();
  const hasher = new Sha256();
  for (;;) {
    const { done, value } = await reader.read();
    if (done) {
      break;
    }
    hasher.update(value);
  }
  return hasher.hex();
}

/** Hash a File or Blob without buffering it whole. */
export async function hashFile(file: Blob): Promise<string> {
  return hashStream(file.stream());
}
