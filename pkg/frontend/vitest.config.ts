import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    // the integration suite boots the Python session server
    testTimeout: 30_000,
    hookTimeout: 30_000,
  },
});
