/**
 * Request inspection against a stubbed fetch: what each flow puts on the
 * wire, and, for the hash pages, what it provably does not.
 */

import { createHash } from "node:crypto";
import { afterEach, beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { computeHashFlow, loginHashFlow, loginObjectFlow, signupFlow } from "../src/pages.js";

interface Recorded {
  url: string;
  init: RequestInit | undefined;
}

const SENTINEL = "FILE-BYTES-MUST-NOT-LEAVE-THE-BROWSER-c41d06f2";

let recorded: Recorded[];
let nextResponse: () => Response;
const realFetch = globalThis.fetch;

beforeEach(() => {
  recorded = [];
  nextResponse = () =>
    new Response(JSON.stringify({ status: "ok", auth_time_ms: 3.25 }), {
      status: 200,
      headers: { "content-type": "application/json", "x-auth-time-ms": "3.250" },
    });
  globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
    recorded.push({ url: String(input), init });
    return nextResponse();
  }) as typeof fetch;
});

afterEach(() => {
  globalThis.fetch = realFetch;
});

function sentinelFile(): File {
  return new File([SENTINEL], "secret.bin");
}

describe("computeHashFlow", () => {
  it("digests locally and performs zero network requests", async () => {
    const { digest } = await computeHashFlow(sentinelFile());
    expect(digest).toBe(createHash("sha256").update(SENTINEL).digest("hex"));
    expect(recorded).toHaveLength(0);
  });
});

describe("loginHashFlow request body", () => {
  it("sends only user id and digest, never the file bytes", async () => {
    const api = new ApiClient("http://example.test");
    const { digest } = await computeHashFlow(sentinelFile());
    const result = await loginHashFlow(api, "alice", digest);

    expect(result.kind).toBe("success");
    expect(recorded).toHaveLength(1);
    const request = recorded[0]!;
    expect(request.url).toBe("http://example.test/api/login/hash");
    expect(typeof request.init?.body).toBe("string");
    const body = request.init!.body as string;
    expect(body).not.toContain(SENTINEL);
    expect(JSON.parse(body)).toEqual({ user_id: "alice", password: digest });
  });

  it("rejects a malformed digest before any request is made", async () => {
    const api = new ApiClient("http://example.test");
    const result = await loginHashFlow(api, "alice", "not-a-digest");
    expect(result.kind).toBe("error");
    expect(recorded).toHaveLength(0);
  });

  it("normalizes uppercase digests", async () => {
    const api = new ApiClient("http://example.test");
    const digest = "A".repeat(64);
    await loginHashFlow(api, "alice", `  ${digest}  `);
    const body = JSON.parse(recorded[0]!.init!.body as string) as { password: string };
    expect(body.password).toBe("a".repeat(64));
  });
});

describe("upload flows carry the file as multipart form data", () => {
  it("signup includes the file bytes and the user id", async () => {
    const api = new ApiClient("http://example.test/");
    await signupFlow(api, "bob", sentinelFile());

    expect(recorded).toHaveLength(1);
    expect(recorded[0]!.url).toBe("http://example.test/api/signup");
    const form = recorded[0]!.init!.body as FormData;
    expect(form).toBeInstanceOf(FormData);
    expect(form.get("user_id")).toBe("bob");
    const upload = form.get("object") as File;
    expect(await upload.text()).toBe(SENTINEL);
  });

  it("login-object posts to its own endpoint", async () => {
    const api = new ApiClient("http://example.test");
    await loginObjectFlow(api, "bob", sentinelFile());
    expect(recorded[0]!.url).toBe("http://example.test/api/login/object");
    expect(recorded[0]!.init!.body).toBeInstanceOf(FormData);
  });
});

describe("outcome mapping", () => {
  it("parses the auth-time header", async () => {
    const api = new ApiClient("http://example.test");
    const result = await loginHashFlow(api, "alice", "0".repeat(64));
    expect(result.kind).toBe("success");
    expect(result.authTimeMs).toBe(3.25);
  });

  it("maps 401 to a rejection, not an error", async () => {
    nextResponse = () =>
      new Response('{"status":"rejected","auth_time_ms":0.0}', {
        status: 401,
        headers: { "x-auth-time-ms": "1.000" },
      });
    const api = new ApiClient("http://example.test");
    const result = await loginHashFlow(api, "alice", "0".repeat(64));
    expect(result.kind).toBe("rejected");
  });

  it("surfaces the duplicate-user error code as a friendly message", async () => {
    nextResponse = () =>
      new Response('{"status":"error","code":"duplicate_user"}', { status: 409 });
    const api = new ApiClient("http://example.test");
    const result = await signupFlow(api, "bob", sentinelFile());
    expect(result.kind).toBe("error");
    expect(result.message).toContain("already registered");
  });

  it("falls back to the HTTP status for unknown errors", async () => {
    nextResponse = () => new Response("gateway exploded", { status: 502 });
    const api = new ApiClient("http://example.test");
    const result = await signupFlow(api, "bob", sentinelFile());
    expect(result.kind).toBe("error");
    expect(result.message).toContain("502");
  });
});
