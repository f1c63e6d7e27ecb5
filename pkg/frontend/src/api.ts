/**
 * HTTP client for the authentication service.
 *
 * Two login transports exist on purpose: loginObject uploads the file
 * itself as multipart form data, while loginHash sends only the 64-char
 * hex digest as JSON. The hash pages of the UI must use loginHash so the
 * file bytes never leave the browser.
 */

export type Verdict = "accepted" | "rejected" | "error";

export interface AuthOutcome {
  ok: boolean;
  status: number;
  verdict: Verdict;
  /** Server-side auth time from the X-Auth-Time-Ms header, when present. */
  authTimeMs?: number;
  /** Machine-readable code from an error body, e.g. "duplicate_user". */
  errorCode?: string;
}

const HEX_64 = /^[0-9a-f]{64}$/;

export function isHexDigest(value: string): boolean {
  return HEX_64.test(value);
}

export class ApiClient {
  readonly baseUrl: string;

  constructor(baseUrl: string) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  /** Register a user with an object file as the credential. */
  async signup(userId: string, file: File): Promise<AuthOutcome> {
    const form = new FormData();
    form.append("user_id", userId);
    form.append("object", file, file.name || "object.bin");
    return this.request("/api/signup", { method: "POST", body: form });
  }

  /** Authenticate by uploading the object file. */
  async loginObject(userId: string, file: File): Promise<AuthOutcome> {
    const form = new FormData();
    form.append("user_id", userId);
    form.append("object", file, file.name || "object.bin");
    return this.request("/api/login/object", { method: "POST", body: form });
  }

  /** Authenticate with a locally computed digest; no file bytes on the wire. */
  async loginHash(userId: string, digestHex: string): Promise<AuthOutcome> {
    return this.request("/api/login/hash", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ user_id: userId, password: digestHex }),
    });
  }

  async health(): Promise<boolean> {
    try {
      const response = await fetch(`${this.baseUrl}/api/health`);
      return response.ok;
    } catch {
      return false;
    }
  }

  private async request(path: string, init: RequestInit): Promise<AuthOutcome> {
    const response = await fetch(`${this.baseUrl}${path}`, init);
    const header = response.headers.get("x-auth-time-ms");
    const outcome: AuthOutcome = {
      ok: response.ok,
      status: response.status,
      verdict: response.ok ? "accepted" : response.status === 401 ? "rejected" : "error",
    };
    if (header !== null) {
      const parsed = Number(header);
      if (Number.isFinite(parsed)) {
        outcome.authTimeMs = parsed;
      }
    }
    if (!response.ok && response.status !== 401) {
      try {
        const body = (await response.json()) as { code?: unknown };
        if (typeof body.code === "string") {
          outcome.errorCode = body.code;
        }
      } catch {
        // Non-JSON error body; leave errorCode unset.
      }
    }
    return outcome;
  }
}
