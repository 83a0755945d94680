// End-to-end consistency: driving the pick sequence through the panel's
// own controller against a live bridge yields a trace byte-identical to
// the CLI replay with the same seed, and the panel highlights
// gather(water-bottle) as the chosen opportunity at s1.0.

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { execFile, spawn, type ChildProcess } from "node:child_process";
import { fileURLToPath } from "node:url";
import { promisify } from "node:util";

import { BridgeClient } from "../src/api";
import { SessionController } from "../src/app";
import { renderDecision } from "../src/table";

const ROOT = fileURLToPath(new URL("../..", import.meta.url));
const PORT = 8921 + (process.pid % 500);
const BASE = `http://127.0.0.1:${PORT}`;
const PICKS = ["s1.0", "s2.0", "s3.0"];
const SEED = 0;

const run = promisify(execFile);
let server: ChildProcess;

async function waitForBridge(): Promise<void> {
  for (let attempt = 0; attempt < 80; attempt++) {
    try {
      const response = await fetch(`${BASE}/v1/session`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error("bridge did not come up");
}

beforeAll(async () => {
  server = spawn(
    "python3",
    [
      "-m",
      "proactive.cli",
      "serve",
      "--port",
      String(PORT),
      "--mode",
      "combined",
      "--seed",
      String(SEED),
    ],
    { cwd: ROOT, stdio: "ignore" },
  );
  await waitForBridge();
});

afterAll(() => {
  server?.kill();
});

describe("panel against a live bridge", () => {
  it("produces the same bytes as the CLI replay and highlights the water bottle", async () => {
    const client = new BridgeClient(BASE);
    const controller = new SessionController(client);
    await controller.load();
    expect(controller.state.session?.current_state).toBe("s0");

    for (const target of PICKS) {
      await controller.pickTransition(target);
      expect(controller.state.error).toBeNull();
    }

    const bridgeTrace = await client.getTrace();
    const cli = await run(
      "python3",
      [
        "-m",
        "proactive.cli",
        "run",
        "--mode",
        "combined",
        "--trajectory",
        ["s0", ...PICKS].join(","),
        "--seed",
        String(SEED),
        "--json",
      ],
      { cwd: ROOT },
    );
    expect(bridgeTrace).toBe(cli.stdout);

    // the decision shown for the s1.0 step highlights the intention's action
    controller.select(1);
    const event = controller.selectedEvent();
    expect(event).not.toBeNull();
    const box = document.createElement("div");
    renderDecision(box, event);
    const chosen = box.querySelectorAll("tr.chosen");
    expect(chosen).toHaveLength(1);
    expect(chosen[0].textContent).toContain("gather water bottle");
  });

  it("rejects an illegal pick and keeps the session usable", async () => {
    const client = new BridgeClient(BASE);
    const controller = new SessionController(client);
    await controller.load();
    await controller.pickTransition("s0");
    expect(controller.state.error).toContain("not a free-run edge");
    const session = await client.getSession();
    expect(session.current_state).toBe("s3.0'");
  });

  it("mode switching changes subsequent decisions only", async () => {
    const client = new BridgeClient(BASE);
    const controller = new SessionController(client);
    await controller.load();
    await controller.setMode("hir");
    expect(controller.state.session?.mode).toBe("hir");
    const before = await client.getTrace();
    await controller.setMode("combined");
    expect(await client.getTrace()).toBe(before);
  });
});
