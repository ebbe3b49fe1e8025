/** Error taxonomy mirroring the core library's exit-code contract. */

export class MobError extends Error {
  constructor(message: string) {
    super(message);
    this.name = new.target.name;
  }
}

/** Buffer length, finiteness, or dimension violations caught before the CLI runs. */
export class InvalidBufferError extends MobError {}

export class DimensionMismatchError extends MobError {}

/** The CLI rejected the configuration (exit code 2). */
export class InvalidConfigError extends MobError {}

/** The CLI failed on I/O (exit code 3) or could not be spawned. */
export class CliIoError extends MobError {}

/** A file the bindings produced or consumed is malformed. */
export class FormatError extends MobError {}
