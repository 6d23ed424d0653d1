// Thin typed client for the console service. One method per endpoint; the
// caller serializes mutations (at most one in flight).

import type { GraphPayload, StatePayload, SynthesisPayload, Target } from "./types.js";

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    readonly baseUrl: string = "",
    readonly session: string = "console",
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await fetch(this.baseUrl + path, {
      method,
      headers: {
        "Content-Type": "application/json",
        "X-Session": this.session,
      },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const doc = (await resp.json()) as T & { error?: string };
    if (!resp.ok) {
      throw new ApiError(doc.error ?? `http ${resp.status}`, resp.status);
    }
    return doc;
  }

  state(): Promise<StatePayload> {
    return this.request("GET", "/api/state");
  }

  apply(arbitrage: number): Promise<StatePayload> {
    return this.request("POST", "/api/apply", { arbitrage });
  }

  undo(): Promise<StatePayload> {
    return this.request("POST", "/api/undo");
  }

  reset(body: { alpha?: number; perturb?: number; base?: number[]; log_rates?: number[] }): Promise<StatePayload> {
    return this.request("POST", "/api/reset", body);
  }

  synthesize(target: Target, method: "printed" | "bfs"): Promise<SynthesisPayload> {
    return this.request("POST", "/api/synthesize", {
      n1: target[0],
      n2: target[1],
      n3: target[2],
      method,
    });
  }

  graph(a?: number, b?: number): Promise<GraphPayload> {
    const params = new URLSearchParams();
    if (a !== undefined) params.set("a", String(a));
    if (b !== undefined) params.set("b", String(b));
    const suffix = params.size ? `?${params.toString()}` : "";
    return this.request("GET", `/api/graph${suffix}`);
  }

  playbackLoad(chain: number[]): Promise<StatePayload> {
    return this.request("POST", "/api/playback", { chain, cursor: 0 });
  }

  playbackSeek(cursor: number): Promise<StatePayload> {
    return this.request("POST", "/api/playback", { cursor });
  }
}
