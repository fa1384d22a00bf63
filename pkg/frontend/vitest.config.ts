import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    environment: "node",
    // the contract suite boots the real experiment service
    testTimeout: 60000,
    hookTimeout: 60000,
  },
});
