import { defineConfig } from "vitest/config";

export default defineConfig({
  build: {
    outDir: "dist",
    sourcemap: true,
  },
  server: {
    proxy: {
      // during development the profiling service runs separately
      "/topics": "http://127.0.0.1:8000",
      "/students": "http://127.0.0.1:8000",
      "/projection": "http://127.0.0.1:8000",
      "/neighbors": "http://127.0.0.1:8000",
      "/cohort": "http://127.0.0.1:8000",
      "/outliers": "http://127.0.0.1:8000",
    },
  },
  test: {
    environment: "happy-dom",
    include: ["tests/**/*.test.ts"],
    setupFiles: ["tests/setup.ts"],
    testTimeout: 30000,
    hookTimeout: 120000,
  },
});
