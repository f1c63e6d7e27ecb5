/**
 * Page flows, separated from DOM wiring so they run headless under tests.
 * Each flow takes its inputs, talks to the API (or only to the local
 * hasher, for computeHashFlow) and returns a renderable result.
 */

import { ApiClient, isHexDigest } from "./api.js";
import { hashFile } from "./sha256.js";

export interface PageResult {
  kind: "success" | "rejected" | "error";
  message: string;
  authTimeMs?: number;
}

const ERROR_MESSAGES: Record<string, string> = {
  duplicate_user: "That user id is already registered.",
  empty_object: "The selected file is empty; pick a file with content.",
  too_large: "The file exceeds the server's upload limit.",
  bad_request: "The server rejected the request as malformed.",
};

function errorMessage(status: number, code?: string): string {
  if (code && code in ERROR_MESSAGES) {
    return ERROR_MESSAGES[code]!;
  }
  return `Request failed with HTTP ${status}.`;
}

export async function signupFlow(api: ApiClient, userId: string, file: File): Promise<PageResult> {
  if (!userId) {
    return { kind: "error", message: "Enter a user id." };
  }
  const outcome = await api.signup(userId, file);
  if (outcome.ok) {
    return {
      kind: "success",
      message: `Registered ${userId}.`,
      ...(outcome.authTimeMs !== undefined && { authTimeMs: outcome.authTimeMs }),
    };
  }
  return { kind: "error", message: errorMessage(outcome.status, outcome.errorCode) };
}

export async function loginObjectFlow(
  api: ApiClient,
  userId: string,
  file: File,
): Promise<PageResult> {
  if (!userId) {
    return { kind: "error", message: "Enter a user id." };
  }
  const outcome = await api.loginObject(userId, file);
  if (outcome.ok) {
    return {
      kind: "success",
      message: `Login accepted for ${userId}.`,
      ...(outcome.authTimeMs !== undefined && { authTimeMs: outcome.authTimeMs }),
    };
  }
  if (outcome.verdict === "rejected") {
    return { kind: "rejected", message: "Login rejected: object does not match." };
  }
  return { kind: "error", message: errorMessage(outcome.status, outcome.errorCode) };
}

/** Digest a file locally. Performs no network requests at all. */
export async function computeHashFlow(file: File): Promise<{ digest: string }> {
  return { digest: await hashFile(file) };
}

export async function loginHashFlow(
  api: ApiClient,
  userId: string,
  digestHex: string,
): Promise<PageResult> {
  if (!userId) {
    return { kind: "error", message: "Enter a user id." };
  }
  const digest = digestHex.trim().toLowerCase();
  if (!isHexDigest(digest)) {
    return { kind: "error", message: "Digest must be 64 hex characters." };
  }
  const outcome = await api.loginHash(userId, digest);
  if (outcome.ok) {
    return {
      kind: "success",
      message: `Login accepted for ${userId}.`,
      ...(outcome.authTimeMs !== undefined && { authTimeMs: outcome.authTimeMs }),
    };
  }
  if (outcome.verdict === "rejected") {
    return { kind: "rejected", message: "Login rejected: digest does not match." };
  }
  return { kind: "error", message: errorMessage(outcome.status, outcome.errorCode) };
}
