/** Network layer. Every request funnels through one guard that only
 * lets same-origin /v1 paths out, so the sensitive text and the
 * substitution history can never be shipped to a foreign origin. */

import type {
  DecodeResponse,
  EncodeResponse,
  EngineInfo,
  SendResponse,
} from "./types.js";

export class LocalOnlyViolation extends Error {
  constructor(url: string) {
    super(`refusing non-local request to ${url}`);
    this.name = "LocalOnlyViolation";
  }
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

/** Only relative paths under /v1 may leave the page. */
export function assertLocalApiPath(url: string): void {
  if (!url.startsWith("/v1/") || url.includes("//") || url.includes("..")) {
    throw new LocalOnlyViolation(url);
  }
}

export type FetchLike = (
  url: string,
  init?: RequestInit,
) => Promise<Response>;

export interface EncodeParams {
  method: string;
  ratio: number;
  seed?: number;
  beta?: number;
}

export class ApiClient {
  private readonly fetchImpl: FetchLike;

  constructor(fetchImpl?: FetchLike) {
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  private async request<T>(url: string, init?: RequestInit): Promise<T> {
    assertLocalApiPath(url);
    let response: Response;
    try {
      response = await this.fetchImpl(url, init);
    } catch (err) {
      if (err instanceof LocalOnlyViolation) throw err;
      throw new ApiError(0, "service unreachable");
    }
    if (!response.ok) {
      let detail = `${response.status}`;
      try {
        const body = (await response.json()) as { detail?: unknown };
        if (typeof body.detail === "string") detail = body.detail;
      } catch {
        /* non-JSON error body; keep the status text */
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  private post<T>(url: string, body: unknown): Promise<T> {
    return this.request<T>(url, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  createSession(text: string): Promise<{ session_id: string }> {
    return this.post("/v1/sessions", { text });
  }

  encode(sessionId: string, params: EncodeParams): Promise<EncodeResponse> {
    return this.post(`/v1/sessions/${sessionId}/encode`, params);
  }

  send(sessionId: string, engine: string): Promise<SendResponse> {
    return this.post(`/v1/sessions/${sessionId}/send`, { engine });
  }

  decode(sessionId: string): Promise<DecodeResponse> {
    return this.post(`/v1/sessions/${sessionId}/decode`, {});
  }

  engines(): Promise<{ engines: EngineInfo[] }> {
    return this.request("/v1/engines");
  }

  dictStats(): Promise<{ entries: number; vocab_size: number; mode: string }> {
    return this.request("/v1/dict/stats");
  }
}
