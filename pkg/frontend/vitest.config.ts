import { defineConfig } from "vitest/config";

// Parity tests spawn the Python CLI repeatedly; interpreter startup
// dominates, so the default 5 s budget is far too tight.
export default defineConfig({
  test: {
    testTimeout: 180_000,
    hookTimeout: 180_000,
  },
});
