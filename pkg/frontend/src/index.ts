/** Thin bindings over the `mob` CLI for ML pipelines.
 *
 * Embeddings travel as caller-provided row-major float buffers; each call
 * round-trips them through the CLI's binary format in a temp directory and
 * parses the structured results back. No selection or measurement logic is
 * reimplemented here, so outputs are identical to the command line's.
 */

import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { parseKeyValues, runCli } from "./cli.js";
import { DimensionMismatchError, InvalidConfigError } from "./errors.js";
import { writeMobe } from "./mobe.js";
import { readSelection } from "./selection.js";
import { checkView, type BoundView } from "./view.js";

export { BoundView, checkView } from "./view.js";
export { readMobe, writeMobe } from "./mobe.js";
export { readSelection, parseSelectionText, type SelectionDocument } from "./selection.js";
export * from "./errors.js";

/** Mirrors the core library version. */
export const VERSION = "0.1.0";

export type CouplingClass = "strong" | "weak";
export type Tier = "high" | "mid" | "low";
export type MetricName = "raw" | "normalized";

export interface PruneResult {
  promptIndices: number[];
  visualIndices: number[];
  epsPDirected: number;
  epsPSymmetric: number;
  epsV: number;
  eta: number;
  shortfallReassigned: number;
}

export interface CouplingResult {
  hVToP: number;
  hPToV: number;
  eta: number;
  classification: "strong" | "weak" | "unclassified";
}

function withTempDir<T>(fn: (dir: string) => T): T {
  const dir = mkdtempSync(join(tmpdir(), "mobcover-"));
  try {
    return fn(dir);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

function checkPair(visual: BoundView, prompt: BoundView): void {
  checkView(visual, "visual");
  checkView(prompt, "prompt");
  if (visual.d !== prompt.d) {
    throw new DimensionMismatchError(`d mismatch: ${visual.d} vs ${prompt.d}`);
  }
}

/** Budgeted subset selection: K retained rows, K_p of them prompt centers
 * chosen with covering fold k. Index lists are identical to the CLI's. */
export function prune(
  visual: BoundView,
  prompt: BoundView,
  budgetK: number,
  budgetKp: number,
  foldK: number
): PruneResult {
  checkPair(visual, prompt);
  return withTempDir((dir) => {
    const vPath = join(dir, "v.mobe");
    const pPath = join(dir, "p.mobe");
    const outPath = join(dir, "selection.json");
    writeMobe(vPath, visual);
    writeMobe(pPath, prompt);
    runCli([
      "prune",
      "--visual", vPath,
      "--prompt", pPath,
      "--budget", String(budgetK),
      "--kp", String(budgetKp),
      "--fold", String(foldK),
      "--out", outPath,
    ]);
    const doc = readSelection(outPath);
    return {
      promptIndices: doc.indicesPrompt,
      visualIndices: doc.indicesVisual,
      epsPDirected: doc.epsPDirected,
      epsPSymmetric: doc.epsPSymmetric,
      epsV: doc.epsV,
      eta: doc.eta,
      shortfallReassigned: doc.shortfallReassigned,
    };
  });
}

/** Directed Hausdorff distances both ways and their max. */
export function coupling(
  visual: BoundView,
  prompt: BoundView,
  metric: MetricName = "normalized"
): CouplingResult {
  checkPair(visual, prompt);
  return withTempDir((dir) => {
    const vPath = join(dir, "v.mobe");
    const pPath = join(dir, "p.mobe");
    writeMobe(vPath, visual);
    writeMobe(pPath, prompt);
    const stdout = runCli([
      "coupling",
      "--visual", vPath,
      "--prompt", pPath,
      "--metric", metric,
    ]);
    const kv = parseKeyValues(stdout);
    return {
      hVToP: Number(kv.get("h_v_to_p")),
      hPToV: Number(kv.get("h_p_to_v")),
      eta: Number(kv.get("eta")),
      classification: (kv.get("classification") ?? "unclassified") as
        | "strong"
        | "weak"
        | "unclassified",
    };
  });
}

const PRIOR_FRACTIONS: Record<CouplingClass, Record<Tier, [number, number]>> = {
  strong: { high: [3, 8], mid: [1, 4], low: [1, 4] },
  weak: { high: [1, 2], mid: [7, 16], low: [5, 12] },
};
const FOLD_RULES: Record<CouplingClass, [number, number]> = {
  strong: [3, 40],
  weak: [1, 8],
};

/** (K_p, fold_k) from the coupling-prior fractions; parity with the CLI's
 * --eta-prior/--tier path is covered by tests. */
export function budgetHeuristic(
  budgetK: number,
  couplingClass: CouplingClass,
  tier: Tier
): { budgetKp: number; foldK: number } {
  if (budgetK < 8) throw new InvalidConfigError(`budget_K must be >= 8, got ${budgetK}`);
  const [num, den] = PRIOR_FRACTIONS[couplingClass][tier];
  const kp = Math.min(Math.floor((budgetK * num) / den), budgetK);
  if (kp < 1) {
    throw new InvalidConfigError(`prior fraction leaves no prompt budget for K=${budgetK}`);
  }
  const [fnum, fden] = FOLD_RULES[couplingClass];
  const fold = Math.max(1, Math.floor((kp * fnum) / fden + 0.5));
  return { budgetKp: kp, foldK: fold };
}
