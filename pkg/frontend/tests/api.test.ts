import { describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

function okResponse(body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status: 200,
    headers: { "content-type": "application/json" },
  });
}

describe("ApiClient", () => {
  it("posts session requests to the configured base URL", async () => {
    const fetchFn = vi.fn().mockResolvedValue(okResponse({ id: "x" }));
    const client = new ApiClient("http://svc:1234", fetchFn);
    await client.newSession("queen", 20, 7);
    const [url, init] = fetchFn.mock.calls[0];
    expect(url).toBe("http://svc:1234/session");
    expect(JSON.parse(init.body)).toEqual({ piece: "queen", tiles: 20, seed: 7 });
  });

  it("omits the seed when not provided", async () => {
    const fetchFn = vi.fn().mockResolvedValue(okResponse({ id: "x" }));
    await new ApiClient("http://svc", fetchFn).newSession("rook", 50);
    expect(JSON.parse(fetchFn.mock.calls[0][1].body)).toEqual({
      piece: "rook",
      tiles: 50,
    });
  });

  it("submits placements to the session endpoint", async () => {
    const fetchFn = vi.fn().mockResolvedValue(okResponse({ dominates: true }));
    await new ApiClient("http://svc", fetchFn).submit("abc", [[1, 2]]);
    const [url, init] = fetchFn.mock.calls[0];
    expect(url).toBe("http://svc/session/abc/submit");
    expect(JSON.parse(init.body)).toEqual({ cells: [[1, 2]] });
  });

  it("raises ApiError with the HTTP status on failure", async () => {
    const fetchFn = vi
      .fn()
      .mockImplementation(async () => new Response("gone", { status: 404 }));
    const client = new ApiClient("http://svc", fetchFn);
    await expect(client.hint("nope")).rejects.toMatchObject({ status: 404 });
    await expect(client.hint("nope")).rejects.toBeInstanceOf(ApiError);
  });
});
