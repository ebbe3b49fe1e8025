/** Spawn helper for the `mob` command-line tool. */

import { spawnSync } from "node:child_process";

import { CliIoError, InvalidConfigError, MobError } from "./errors.js";

/** Resolve the executable: MOB_CLI overrides the PATH lookup. */
export function cliPath(): string {
  return process.env.MOB_CLI ?? "mob";
}

export function runCli(args: string[]): string {
  const proc = spawnSync(cliPath(), args, { encoding: "utf-8" });
  if (proc.error) {
    throw new CliIoError(`cannot spawn ${cliPath()}: ${proc.error.message}`);
  }
  if (proc.status === 0) return proc.stdout;
  const detail = (proc.stderr ?? "").trim();
  if (proc.status === 2) throw new InvalidConfigError(detail || "invalid configuration");
  if (proc.status === 3) throw new CliIoError(detail || "I/O failure");
  throw new MobError(`exit code ${proc.status}: ${detail}`);
}

/** Parse `key=value` stdout lines into a map. */
export function parseKeyValues(stdout: string): Map<string, string> {
  const out = new Map<string, string>();
  for (const line of stdout.split("\n")) {
    const eq = line.indexOf("=");
    if (eq > 0) out.set(line.slice(0, eq), line.slice(eq + 1));
  }
  return out;
}
