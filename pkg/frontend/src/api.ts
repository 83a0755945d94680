// Thin typed client for the bridge; all reasoning stays server-side.

import type { GraphResponse, SessionInfo, TraceEvent } from "./types";

export class ApiError extends Error {
  constructor(
    public status: number,
    detail: string,
  ) {
    super(detail);
  }
}

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(base + path, init);
  if (!response.ok) {
    let detail = `${response.status} on ${path}`;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // keep the generic detail
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

function post(body: unknown): RequestInit {
  return {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  };
}

export class BridgeClient {
  constructor(readonly base: string = "") {}

  getGraph(): Promise<GraphResponse> {
    return request(this.base, "/v1/graph");
  }

  getSession(): Promise<SessionInfo> {
    return request(this.base, "/v1/session");
  }

  async getTrace(): Promise<string> {
    const response = await fetch(this.base + "/v1/trace");
    if (!response.ok) throw new ApiError(response.status, "cannot fetch trace");
    return response.text();
  }

  stepTo(target: string): Promise<TraceEvent> {
    return request(this.base, "/v1/step", post({ to: target }));
  }

  stepAction(action: string, outcome?: number): Promise<TraceEvent> {
    const body = outcome === undefined ? { action } : { action, outcome };
    return request(this.base, "/v1/step", post(body));
  }

  setMode(mode: string): Promise<SessionInfo> {
    return request(this.base, "/v1/mode", post({ mode }));
  }

  reset(seed: number, mode?: string, initial?: string): Promise<TraceEvent> {
    return request(this.base, "/v1/reset", post({ seed, mode, initial }));
  }
}

export function parseTrace(jsonl: string): TraceEvent[] {
  return jsonl
    .split("\n")
    .filter((line) => line.trim().length > 0)
    .map((line) => JSON.parse(line) as TraceEvent);
}
