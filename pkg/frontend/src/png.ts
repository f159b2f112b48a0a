/**
 * Dependency-free greyscale PNG encoding.
 *
 * Microscope frames arrive as raw grey-u8 bytes; browsers can only show
 * them via an image URL, so the bytes are wrapped in a real PNG using
 * stored (uncompressed) deflate blocks. Works in browsers and in node.
 */

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(bytes: Uint8Array): number {
  let crc = 0xffffffff;
  for (let i = 0; i < bytes.length; i++) {
    crc = CRC_TABLE[(crc ^ bytes[i]) & 0xff] ^ (crc >>> 8);
  }
  return (crc ^ 0xffffffff) >>> 0;
}

function adler32(bytes: Uint8Array): number {
  let a = 1;
  let b = 0;
  for (let i = 0; i < bytes.length; i++) {
    a = (a + bytes[i]) % 65521;
    b = (b + a) % 65521;
  }
  return ((b << 16) | a) >>> 0;
}

function u32be(value: number): Uint8Array {
  return new Uint8Array([
    (value >>> 24) & 0xff,
    (value >>> 16) & 0xff,
    (value >>> 8) & 0xff,
    value & 0xff,
  ]);
}

function concat(parts: Uint8Array[]): Uint8Array {
  const total = parts.reduce((sum, p) => sum + p.length, 0);
  const out = new Uint8Array(total);
  let offset = 0;
  for (const part of parts) {
    out.set(part, offset);
    offset += part.length;
  }
  return out;
}

function pngChunk(type: string, body: Uint8Array): Uint8Array {
  const typeBytes = new TextEncoder().encode(type);
  const crcInput = concat([typeBytes, body]);
  return concat([u32be(body.length), crcInput, u32be(crc32(crcInput))]);
}

/** zlib stream with stored deflate blocks: valid everywhere, zero deps. */
function zlibStored(raw: Uint8Array): Uint8Array {
  const parts: Uint8Array[] = [new Uint8Array([0x78, 0x01])];
  const blockSize = 65535;
  for (let offset = 0; offset < raw.length || raw.length === 0; offset += blockSize) {
    const block = raw.subarray(offset, Math.min(offset + blockSize, raw.length));
    const final = offset + blockSize >= raw.length ? 1 : 0;
    const len = block.length;
    parts.push(
      new Uint8Array([final, len & 0xff, (len >>> 8) & 0xff, ~len & 0xff, (~len >>> 8) & 0xff]),
    );
    parts.push(block);
    if (raw.length === 0) break;
  }
  parts.push(u32be(adler32(raw)));
  return concat(parts);
}

const PNG_SIGNATURE = new Uint8Array([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]);

export function encodeGreyPng(width: number, height: number, grey: Uint8Array): Uint8Array {
  if (grey.length !== width * height) {
    throw new Error(`expected ${width * height} pixels, got ${grey.length}`);
  }
  const ihdr = concat([
    u32be(width),
    u32be(height),
    new Uint8Array([8, 0, 0, 0, 0]), // 8-bit, greyscale, deflate, none, no interlace
  ]);
  // one filter byte (0: none) ahead of each scanline
  const raw = new Uint8Array(height * (width + 1));
  for (let y = 0; y < height; y++) {
    raw[y * (width + 1)] = 0;
    raw.set(grey.subarray(y * width, (y + 1) * width), y * (width + 1) + 1);
  }
  return concat([
    PNG_SIGNATURE,
    pngChunk('IHDR', ihdr),
    pngChunk('IDAT', zlibStored(raw)),
    pngChunk('IEND', new Uint8Array(0)),
  ]);
}

export function bytesToBase64(bytes: Uint8Array): string {
  let binary = '';
  const step = 8192;
  for (let i = 0; i < bytes.length; i += step) {
    binary += String.fromCharCode(...bytes.subarray(i, i + step));
  }
  return btoa(binary);
}

export function base64ToBytes(b64: string): Uint8Array {
  const binary = atob(b64);
  const out = new Uint8Array(binary.length);
  for (let i = 0; i < binary.length; i++) out[i] = binary.charCodeAt(i);
  return out;
}

/** Data URL for raw grey-u8 pixels delivered as base64. */
export function greyPngDataUrl(width: number, height: number, dataB64: string): string {
  const png = encodeGreyPng(width, height, base64ToBytes(dataB64));
  return `data:image/png;base64,${bytesToBase64(png)}`;
}
