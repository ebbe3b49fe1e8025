/** Caller-provided embedding buffers: a contiguous row-major float block
 * plus its (n, d) shape. Typed arrays are contiguous by construction; the
 * checks here pin length and finiteness before anything touches disk.
 */

import { InvalidBufferError } from "./errors.js";

export interface BoundView {
  data: Float64Array | Float32Array;
  n: number;
  d: number;
}

export function checkView(view: BoundView, label: string): void {
  if (!(view.data instanceof Float64Array) && !(view.data instanceof Float32Array)) {
    throw new InvalidBufferError(`${label}: data must be a Float64Array or Float32Array`);
  }
  if (!Number.isInteger(view.n) || !Number.isInteger(view.d) || view.n < 1 || view.d < 1) {
    throw new InvalidBufferError(`${label}: need integer n >= 1 and d >= 1`);
  }
  if (view.data.length !== view.n * view.d) {
    throw new InvalidBufferError(
      `${label}: buffer holds ${view.data.length} scalars, shape implies ${view.n * view.d}`
    );
  }
  for (const x of view.data) {
    if (!Number.isFinite(x)) throw new InvalidBufferError(`${label}: non-finite value`);
  }
}
