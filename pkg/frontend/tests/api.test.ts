import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiError, BridgeClient, parseTrace } from "../src/api";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("BridgeClient", () => {
  it("steps along an edge with a JSON body", async () => {
    const fetchMock = vi.fn().mockResolvedValue(jsonResponse({ step: 1 }));
    vi.stubGlobal("fetch", fetchMock);
    const client = new BridgeClient("http://bridge");
    await client.stepTo("s1.0");
    expect(fetchMock).toHaveBeenCalledWith(
      "http://bridge/v1/step",
      expect.objectContaining({
        method: "POST",
        body: JSON.stringify({ to: "s1.0" }),
      }),
    );
  });

  it("passes the outcome index for human actions", async () => {
    const fetchMock = vi.fn().mockResolvedValue(jsonResponse({ step: 2 }));
    vi.stubGlobal("fetch", fetchMock);
    await new BridgeClient("").stepAction("clean-dishes", 1);
    expect(fetchMock.mock.calls[0][1].body).toBe(
      JSON.stringify({ action: "clean-dishes", outcome: 1 }),
    );
  });

  it("raises ApiError with the bridge's detail", async () => {
    const fetchMock = vi
      .fn()
      .mockResolvedValue(jsonResponse({ detail: "illegal pick" }, 400));
    vi.stubGlobal("fetch", fetchMock);
    await expect(new BridgeClient("").stepTo("s9")).rejects.toThrowError(
      new ApiError(400, "illegal pick"),
    );
  });

  it("reads session, graph, and trace from their endpoints", async () => {
    const fetchMock = vi.fn((url: string) => {
      if (url.endsWith("/v1/trace")) {
        return Promise.resolve(new Response('{"step":0}\n'));
      }
      return Promise.resolve(jsonResponse({}));
    });
    vi.stubGlobal("fetch", fetchMock);
    const client = new BridgeClient("");
    await client.getGraph();
    await client.getSession();
    await client.getTrace();
    const urls = fetchMock.mock.calls.map((c) => c[0]);
    expect(urls).toEqual(["/v1/graph", "/v1/session", "/v1/trace"]);
  });
});

describe("parseTrace", () => {
  it("splits JSONL and skips blank lines", () => {
    const events = parseTrace('{"step":0}\n{"step":1}\n\n');
    expect(events.map((e) => e.step)).toEqual([0, 1]);
  });
});
