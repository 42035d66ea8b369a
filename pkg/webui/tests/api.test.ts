import { describe, expect, it } from "vitest";

import { ApiClient, ServiceError, isAbortError } from "../src/api.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

describe("ApiClient", () => {
  it("parses structured 4xx bodies into typed errors", async () => {
    const client = new ApiClient("", async () =>
      jsonResponse({ error: "bad_request", message: "unknown code", field: "profile.county_code" }, 422),
    );
    const err = await client.predict({}).catch((e) => e);
    expect(err).toBeInstanceOf(ServiceError);
    expect(err.status).toBe(422);
    expect(err.field).toBe("profile.county_code");
    expect(err.message).toBe("unknown code");
  });

  it("records every successful response for traceability", async () => {
    const client = new ApiClient("", async (url) =>
      url.endsWith("/health")
        ? jsonResponse({ model_version: "m1", catalog_version: "c1" })
        : jsonResponse({ items: [] }),
    );
    await client.health();
    await client.catalog();
    expect(client.intercepted.map((r) => r.path)).toEqual(["/health", "/catalog"]);
    expect(client.intercepted[0]!.body).toEqual({ model_version: "m1", catalog_version: "c1" });
  });

  it("returns plain text for plan reports", async () => {
    const client = new ApiClient("", async () =>
      new Response("plan_id: abc — note", {
        status: 200,
        headers: { "content-type": "text/plain; charset=utf-8" },
      }),
    );
    const text = await client.planReport("abc");
    expect(text).toContain("plan_id: abc");
  });

  it("aborts the in-flight plans call when a newer one starts", async () => {
    const seen: AbortSignal[] = [];
    const gate: Array<() => void> = [];
    const client = new ApiClient("", (url, init) => {
      seen.push(init!.signal!);
      return new Promise((resolve, reject) => {
        init!.signal!.addEventListener("abort", () =>
          reject(new DOMException("aborted", "AbortError")),
        );
        gate.push(() => resolve(jsonResponse({ base_rating: "C1", frontier: [], plan_ids: [] })));
      });
    });

    const first = client.plans({}, null, 0);
    const second = client.plans({}, null, 5000);
    expect(seen.length).toBe(2);
    expect(seen[0]!.aborted).toBe(true);
    expect(seen[1]!.aborted).toBe(false);

    gate[1]!();
    const result = await second;
    expect(result.base_rating).toBe("C1");
    const firstErr = await first.catch((e) => e);
    expect(isAbortError(firstErr)).toBe(true);
  });

  it("falls back to statusText when the error body is not JSON", async () => {
    const client = new ApiClient("", async () =>
      new Response("<html>boom</html>", { status: 500, statusText: "Server Error" }),
    );
    const err = await client.health().catch((e) => e);
    expect(err).toBeInstanceOf(ServiceError);
    expect(err.message).toBe("Server Error");
  });
});
