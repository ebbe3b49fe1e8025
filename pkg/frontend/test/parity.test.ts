/** The bindings must agree with direct CLI invocations on the same inputs:
 * identical index lists, scalars within 1e-9. Instances are produced by the
 * CLI's own generator, read back into plain buffers, and pushed through the
 * bindings (which re-serialize them), so the whole marshaling path is under
 * test.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, describe, expect, it } from "vitest";

import { coupling, prune, readMobe, readSelection } from "../src/index.js";
import { cliPath, parseKeyValues } from "../src/cli.js";

const scratch = mkdtempSync(join(tmpdir(), "mobcover-parity-"));
afterAll(() => rmSync(scratch, { recursive: true, force: true }));

interface Instance {
  vPath: string;
  pPath: string;
  budgetK: number;
  budgetKp: number;
  foldK: number;
}

function cli(args: string[]): string {
  const proc = spawnSync(cliPath(), args, { encoding: "utf-8" });
  expect(proc.status, proc.stderr).toBe(0);
  return proc.stdout;
}

function makeInstances(): Instance[] {
  const shapes = [
    { manifold: "grid2d", nv: 64, np: 10, dim: 8, eta: "5.0" },
    { manifold: "circle", nv: 96, np: 12, dim: 6, eta: "0.9" },
    { manifold: "clusters", nv: 80, np: 11, dim: 9, eta: "4.0" },
  ];
  const out: Instance[] = [];
  for (let i = 0; i < 10; i++) {
    const shape = shapes[i % shapes.length];
    const vPath = join(scratch, `v${i}.mobe`);
    const pPath = join(scratch, `p${i}.mobe`);
    cli([
      "gen",
      "--manifold", shape.manifold,
      "--nv", String(shape.nv),
      "--np", String(shape.np),
      "--dim", String(shape.dim),
      "--eta", shape.eta,
      "--seed", String(100 + i),
      "--out-visual", vPath,
      "--out-prompt", pPath,
    ]);
    out.push({
      vPath,
      pPath,
      budgetK: 8 + 4 * (i % 4),
      budgetKp: 2 + (i % 3),
      foldK: 1 + (i % 3),
    });
  }
  return out;
}

const instances = makeInstances();

describe("prune parity with the CLI", () => {
  it("matches index lists exactly and radii to 1e-9 on 10 instances", () => {
    for (const inst of instances) {
      const selPath = join(scratch, "cli-sel.json");
      cli([
        "prune",
        "--visual", inst.vPath,
        "--prompt", inst.pPath,
        "--budget", String(inst.budgetK),
        "--kp", String(inst.budgetKp),
        "--fold", String(inst.foldK),
        "--out", selPath,
      ]);
      const want = readSelection(selPath);

      const got = prune(
        readMobe(inst.vPath),
        readMobe(inst.pPath),
        inst.budgetK,
        inst.budgetKp,
        inst.foldK
      );
      expect(got.promptIndices).toEqual(want.indicesPrompt);
      expect(got.visualIndices).toEqual(want.indicesVisual);
      expect(got.shortfallReassigned).toBe(want.shortfallReassigned);
      expect(Math.abs(got.epsPDirected - want.epsPDirected)).toBeLessThanOrEqual(1e-9);
      expect(Math.abs(got.epsPSymmetric - want.epsPSymmetric)).toBeLessThanOrEqual(1e-9);
      expect(Math.abs(got.epsV - want.epsV)).toBeLessThanOrEqual(1e-9);
      expect(Math.abs(got.eta - want.eta)).toBeLessThanOrEqual(1e-9);
    }
  });
});

describe("coupling parity with the CLI", () => {
  it("matches all reported distances to 1e-9 on 10 instances", () => {
    for (const inst of instances) {
      const stdout = cli([
        "coupling",
        "--visual", inst.vPath,
        "--prompt", inst.pPath,
        "--metric", "normalized",
      ]);
      const kv = parseKeyValues(stdout);
      const got = coupling(readMobe(inst.vPath), readMobe(inst.pPath), "normalized");
      expect(Math.abs(got.hVToP - Number(kv.get("h_v_to_p")))).toBeLessThanOrEqual(1e-9);
      expect(Math.abs(got.hPToV - Number(kv.get("h_p_to_v")))).toBeLessThanOrEqual(1e-9);
      expect(Math.abs(got.eta - Number(kv.get("eta")))).toBeLessThanOrEqual(1e-9);
      expect(got.classification).toBe("unclassified");
    }
  });
});

describe("budget heuristic parity with the CLI echo", () => {
  it("agrees with prune --eta-prior on every class and tier", async () => {
    const { budgetHeuristic } = await import("../src/index.js");
    const inst = instances[0];
    for (const cls of ["strong", "weak"] as const) {
      for (const tier of ["high", "mid", "low"] as const) {
        const stdout = cli([
          "prune",
          "--visual", inst.vPath,
          "--prompt", inst.pPath,
          "--budget", "32",
          "--eta-prior", cls,
          "--tier", tier,
          "--out", join(scratch, "prior-sel.json"),
        ]);
        const echo = stdout.split("\n")[0]; // "K_p=<kp> k=<fold> heuristic=..."
        const match = /K_p=(\d+) k=(\d+)/.exec(echo);
        expect(match, echo).not.toBeNull();
        const want = { budgetKp: Number(match![1]), foldK: Number(match![2]) };
        expect(budgetHeuristic(32, cls, tier)).toEqual(want);
      }
    }
  });
});

describe("CLI error mapping", () => {
  it("surfaces invalid configuration as InvalidConfigError", async () => {
    const { InvalidConfigError } = await import("../src/index.js");
    const inst = instances[0];
    expect(() =>
      prune(readMobe(inst.vPath), readMobe(inst.pPath), 4, 9, 1)
    ).toThrow(InvalidConfigError);
  });
});

describe("degenerate budgets", () => {
  it("keeps every index when the budget covers the population", () => {
    const inst = instances[0];
    const visual = readMobe(inst.vPath);
    const result = prune(visual, readMobe(inst.pPath), visual.n, 2, 1);
    const retained = [...result.promptIndices, ...result.visualIndices].sort(
      (a, b) => a - b
    );
    expect(retained).toEqual(Array.from({ length: visual.n }, (_, i) => i));
    expect(result.epsV).toBe(0);
  });
});
