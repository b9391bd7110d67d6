/**
 * Decoder for binary (P5) PGM images, the service's image wire format.
 *
 * Header: "P5", width, height, maxval — tokens separated by whitespace,
 * '#' comments allowed — then exactly one whitespace byte, then width*height
 * raster bytes.  Raster bytes that happen to look like whitespace are data.
 * Trailing bytes after the raster are tolerated; a short raster is an error.
 */

export interface GrayImage {
  width: number;
  height: number;
  /** Row-major bytes, one per pixel, exactly width*height long. */
  pixels: Uint8Array;
}

export class PgmError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "PgmError";
  }
}

const WHITESPACE = new Set([0x09, 0x0a, 0x0b, 0x0c, 0x0d, 0x20]);
const HASH = 0x23;
const NEWLINE = 0x0a;

function nextToken(data: Uint8Array, pos: number): { token: string; end: number } {
  for (;;) {
    while (pos < data.length && WHITESPACE.has(data[pos]!)) pos += 1;
    if (pos < data.length && data[pos] === HASH) {
      while (pos < data.length && data[pos] !== NEWLINE) pos += 1;
      continue;
    }
    break;
  }
  if (pos >= data.length) throw new PgmError("truncated header");
  const start = pos;
  while (pos < data.length && !WHITESPACE.has(data[pos]!)) pos += 1;
  let token = "";
  for (let i = start; i < pos; i += 1) token += String.fromCharCode(data[i]!);
  return { token, end: pos };
}

function headerInt(
  data: Uint8Array,
  pos: number,
  what: string,
): { value: number; end: number } {
  const { token, end } = nextToken(data, pos);
  if (!/^\d+$/.test(token)) {
    throw new PgmError(`${what}: expected an integer, got "${token}"`);
  }
  return { value: parseInt(token, 10), end };
}

export function decodePgm(data: Uint8Array): GrayImage {
  const magic = nextToken(data, 0);
  if (magic.token !== "P5") {
    throw new PgmError(`not a binary PGM (magic "${magic.token}")`);
  }
  const width = headerInt(data, magic.end, "width");
  const height = headerInt(data, width.end, "height");
  const maxval = headerInt(data, height.end, "maxval");
  if (width.value < 1 || height.value < 1) {
    throw new PgmError(`bad dimensions ${width.value}x${height.value}`);
  }
  if (maxval.value !== 255) {
    throw new PgmError(`unsupported maxval ${maxval.value} (need 255)`);
  }
  if (maxval.end >= data.length || !WHITESPACE.has(data[maxval.end]!)) {
    throw new PgmError("missing separator after maxval");
  }
  const rasterStart = maxval.end + 1;
  const n = width.value * height.value;
  if (data.length < rasterStart + n) {
    const have = Math.max(0, data.length - rasterStart);
    throw new PgmError(`truncated raster: need ${n} bytes, have ${have}`);
  }
  return {
    width: width.value,
    height: height.value,
    pixels: data.slice(rasterStart, rasterStart + n),
  };
}

/** Expand one grayscale byte per pixel to RGBA for a canvas ImageData buffer. */
export function toRgba(image: GrayImage): Uint8ClampedArray<ArrayBuffer> {
  const out = new Uint8ClampedArray(image.pixels.length * 4);
  for (let i = 0; i < image.pixels.length; i += 1) {
    const v = image.pixels[i]!;
    out[i * 4] = v;
    out[i * 4 + 1] = v;
    out[i * 4 + 2] = v;
    out[i * 4 + 3] = 255;
  }
  return out;
}

export function base64ToBytes(b64: string): Uint8Array {
  const binary = atob(b64);
  const out = new Uint8Array(binary.length);
  for (let i = 0; i < binary.length; i += 1) out[i] = binary.charCodeAt(i);
  return out;
}

export function decodeBase64Pgm(b64: string): GrayImage {
  return decodePgm(base64ToBytes(b64));
}
