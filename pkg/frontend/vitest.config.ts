import { defineConfig } from "vitest/config";

// The e2e suite starts the Python service on this port; making it the page
// origin keeps fetches same-origin, as when the service serves the UI.
export const SERVICE_PORT = 8951;

export default defineConfig({
  test: {
    environment: "happy-dom",
    environmentOptions: {
      happyDOM: {
        url: `http://127.0.0.1:${SERVICE_PORT}/`,
      },
    },
    testTimeout: 60_000,
    hookTimeout: 60_000,
    fileParallelism: false,
  },
});
