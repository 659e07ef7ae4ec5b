/** Thin client for the game service's three endpoints.
 *
 * The UI talks to the primary component only through this module; the
 * base URL is the single point of configuration.
 */

import { Cell, HintResult, SessionData, SubmitResult } from "./types.js";

export const DEFAULT_BASE_URL = "http://127.0.0.1:8080";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = DEFAULT_BASE_URL,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!resp.ok) {
      throw new ApiError(resp.status, await resp.text());
    }
    return (await resp.json()) as T;
  }

  newSession(
    piece: string,
    tiles: number,
    seed?: number,
  ): Promise<SessionData> {
    return this.request<SessionData>("/session", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(seed === undefined ? { piece, tiles } : { piece, tiles, seed }),
    });
  }

  submit(sessionId: string, cells: ReadonlyArray<Cell>): Promise<SubmitResult> {
    return this.request<SubmitResult>(`/session/${sessionId}/submit`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ cells }),
    });
  }

  hint(sessionId: string): Promise<HintResult> {
    return this.request<HintResult>(`/session/${sessionId}/hint`);
  }
}
