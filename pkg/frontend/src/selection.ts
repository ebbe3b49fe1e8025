/** Selection documents: JSON with eight fixed fields; prompt radii may be
 * the bare `Infinity` literal (emitted when no prompt centers were
 * requested), which JSON.parse rejects, so it is rewritten to an
 * overflowing numeric literal first.
 */

import { readFileSync } from "node:fs";

import { FormatError } from "./errors.js";

export interface SelectionDocument {
  indicesPrompt: number[];
  indicesVisual: number[];
  epsPDirected: number;
  epsPSymmetric: number;
  epsV: number;
  eta: number;
  shortfallReassigned: number;
  config: {
    budgetK: number;
    budgetKp: number;
    foldK: number;
    heuristic: string;
  };
}

export function parseSelectionText(text: string): SelectionDocument {
  const safe = text.replace(/-?Infinity/g, (m) => (m.startsWith("-") ? "-1e999" : "1e999"));
  let doc: Record<string, unknown>;
  try {
    doc = JSON.parse(safe);
  } catch (exc) {
    throw new FormatError(`not a selection document: ${(exc as Error).message}`);
  }
  const required = [
    "indices_prompt",
    "indices_visual",
    "eps_p_directed",
    "eps_p_symmetric",
    "eps_v",
    "eta",
    "shortfall_reassigned",
    "config",
  ];
  for (const key of required) {
    if (!(key in doc)) throw new FormatError(`selection document missing ${key}`);
  }
  const cfg = doc.config as Record<string, unknown>;
  return {
    indicesPrompt: doc.indices_prompt as number[],
    indicesVisual: doc.indices_visual as number[],
    epsPDirected: doc.eps_p_directed as number,
    epsPSymmetric: doc.eps_p_symmetric as number,
    epsV: doc.eps_v as number,
    eta: doc.eta as number,
    shortfallReassigned: doc.shortfall_reassigned as number,
    config: {
      budgetK: cfg.budget_k as number,
      budgetKp: cfg.budget_kp as number,
      foldK: cfg.fold_k as number,
      heuristic: cfg.heuristic as string,
    },
  };
}

export function readSelection(path: string): SelectionDocument {
  return parseSelectionText(readFileSync(path, "utf-8"));
}
