/** MOBE binary embedding files (little-endian): magic "MOBE", u16 version,
 * u8 dtype (0 = f32, 1 = f64), u8 reserved, u64 n, u64 d, row-major payload.
 */

import { endianness } from "node:os";
import { readFileSync, writeFileSync } from "node:fs";

import { FormatError, InvalidBufferError } from "./errors.js";
import type { BoundView } from "./view.js";

const MAGIC = "MOBE";
const VERSION = 1;
const HEADER_BYTES = 24;

export function writeMobe(path: string, view: BoundView): void {
  const header = Buffer.alloc(HEADER_BYTES);
  header.write(MAGIC, 0, "ascii");
  header.writeUInt16LE(VERSION, 4);
  header.writeUInt8(view.data instanceof Float64Array ? 1 : 0, 6);
  header.writeUInt8(0, 7);
  header.writeBigUInt64LE(BigInt(view.n), 8);
  header.writeBigUInt64LE(BigInt(view.d), 16);

  let payload: Buffer;
  if (endianness() === "LE") {
    payload = Buffer.from(view.data.buffer, view.data.byteOffset, view.data.byteLength);
  } else {
    const dv = new DataView(new ArrayBuffer(view.data.byteLength));
    const f64 = view.data instanceof Float64Array;
    for (let i = 0; i < view.data.length; i++) {
      if (f64) dv.setFloat64(i * 8, view.data[i], true);
      else dv.setFloat32(i * 4, view.data[i], true);
    }
    payload = Buffer.from(dv.buffer);
  }
  writeFileSync(path, Buffer.concat([header, payload]));
}

export function readMobe(path: string): BoundView {
  const raw = readFileSync(path);
  if (raw.length < HEADER_BYTES) throw new FormatError(`${path}: shorter than the header`);
  if (raw.toString("ascii", 0, 4) !== MAGIC) {
    throw new FormatError(`${path}: bad magic`);
  }
  const version = raw.readUInt16LE(4);
  if (version !== VERSION) throw new FormatError(`${path}: unsupported version ${version}`);
  const dtype = raw.readUInt8(6);
  if (dtype !== 0 && dtype !== 1) throw new FormatError(`${path}: unsupported dtype ${dtype}`);
  const n = Number(raw.readBigUInt64LE(8));
  const d = Number(raw.readBigUInt64LE(16));
  const itemsize = dtype === 1 ? 8 : 4;
  const expected = n * d * itemsize;
  const body = raw.subarray(HEADER_BYTES);
  if (body.length !== expected) {
    throw new FormatError(`${path}: payload is ${body.length} bytes, header implies ${expected}`);
  }
  let data: Float64Array | Float32Array;
  if (endianness() === "LE") {
    const owned = new ArrayBuffer(body.length); // aligned, detached from the pool
    new Uint8Array(owned).set(body);
    data = dtype === 1 ? new Float64Array(owned) : new Float32Array(owned);
  } else {
    const dv = new DataView(body.buffer, body.byteOffset, body.byteLength);
    data = dtype === 1 ? new Float64Array(n * d) : new Float32Array(n * d);
    for (let i = 0; i < n * d; i++) {
      data[i] = dtype === 1 ? dv.getFloat64(i * 8, true) : dv.getFloat32(i * 4, true);
    }
  }
  for (const x of data) {
    if (!Number.isFinite(x)) throw new InvalidBufferError(`${path}: non-finite payload value`);
  }
  return { data, n, d };
}
