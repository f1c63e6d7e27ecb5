import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    // Parity tests hash a 50 MB fixture and flow tests boot a real server.
    testTimeout: 120_000,
    hookTimeout: 60_000,
  },
});
