/** Starts the Python game service once for the whole test run. */

import { ChildProcess, spawn } from "node:child_process";

export const SERVICE_URL = "http://127.0.0.1:8123";

let proc: ChildProcess | undefined;

async function waitForService(): Promise<void> {
  const deadline = Date.now() + 30_000;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${SERVICE_URL}/openapi.json`);
      if (resp.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error("game service did not come up on :8123");
}

export async function setup(): Promise<void> {
  proc = spawn(
    "python3",
    ["-m", "polydom.service", "--port", "8123", "--host", "127.0.0.1"],
    { stdio: "ignore" },
  );
  await waitForService();
}

export async function teardown(): Promise<void> {
  proc?.kill();
}
