/**
 * DOM wiring for the four-page client. All auth logic lives in pages.ts;
 * this module only reads form inputs, invokes the flows and renders the
 * results, so everything below the event handlers is testable headless.
 */

import { ApiClient } from "./api.js";
import { computeHashFlow, loginHashFlow, loginObjectFlow, signupFlow, type PageResult } from "./pages.js";

const BASE_URL_KEY = "objauth.baseUrl";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function currentApi(): ApiClient {
  return new ApiClient(el<HTMLInputElement>("base-url").value || window.location.origin);
}

function renderResult(target: HTMLElement, result: PageResult): void {
  target.className = `result ${result.kind}`;
  target.textContent =
    result.authTimeMs !== undefined
      ? `${result.message} (server auth time ${result.authTimeMs.toFixed(1)} ms)`
      : result.message;
}

function renderPending(target: HTMLElement, message: string): void {
  target.className = "result pending";
  target.textContent = message;
}

function selectedFile(input: HTMLInputElement): File | null {
  return input.files && input.files.length > 0 ? input.files[0]! : null;
}

function showPage(name: string): void {
  for (const section of document.querySelectorAll<HTMLElement>("main > section")) {
    section.hidden = section.id !== `page-${name}`;
  }
  for (const button of document.querySelectorAll<HTMLButtonElement>("nav button")) {
    button.classList.toggle("active", button.dataset["page"] === name);
  }
}

function wireNav(): void {
  for (const button of document.querySelectorAll<HTMLButtonElement>("nav button")) {
    button.addEventListener("click", () => showPage(button.dataset["page"]!));
  }
  showPage("signup");
}

function wireBaseUrl(): void {
  const input = el<HTMLInputElement>("base-url");
  input.value = localStorage.getItem(BASE_URL_KEY) ?? window.location.origin;
  input.addEventListener("change", () => localStorage.setItem(BASE_URL_KEY, input.value));
}

function wireSignup(): void {
  const result = el<HTMLElement>("signup-result");
  el<HTMLFormElement>("signup-form").addEventListener("submit", async (event) => {
    event.preventDefault();
    const file = selectedFile(el<HTMLInputElement>("signup-file"));
    if (file === null) {
      renderResult(result, { kind: "error", message: "Choose an object file." });
      return;
    }
    renderPending(result, "Uploading...");
    renderResult(result, await signupFlow(currentApi(), el<HTMLInputElement>("signup-user").value.trim(), file));
  });
}

function wireLoginObject(): void {
  const result = el<HTMLElement>("login-object-result");
  el<HTMLFormElement>("login-object-form").addEventListener("submit", async (event) => {
    event.preventDefault();
    const file = selectedFile(el<HTMLInputElement>("login-object-file"));
    if (file === null) {
      renderResult(result, { kind: "error", message: "Choose an object file." });
      return;
    }
    renderPending(result, "Uploading...");
    renderResult(
      result,
      await loginObjectFlow(currentApi(), el<HTMLInputElement>("login-object-user").value.trim(), file),
    );
  });
}

function wireComputeHash(): void {
  const result = el<HTMLElement>("hash-result");
  const output = el<HTMLInputElement>("hash-output");
  const copyButton = el<HTMLButtonElement>("hash-copy");
  el<HTMLFormElement>("hash-form").addEventListener("submit", async (event) => {
    event.preventDefault();
    const file = selectedFile(el<HTMLInputElement>("hash-file"));
    if (file === null) {
      renderResult(result, { kind: "error", message: "Choose a file to digest." });
      return;
    }
    renderPending(result, `Hashing ${file.name} locally...`);
    const { digest } = await computeHashFlow(file);
    output.value = digest;
    renderResult(result, {
      kind: "success",
      message: "Digest computed in your browser; the file was not uploaded.",
    });
  });
  copyButton.addEventListener("click", async () => {
    if (output.value) {
      await navigator.clipboard.writeText(output.value);
    }
  });
}

function wireLoginHash(): void {
  const result = el<HTMLElement>("login-hash-result");
  el<HTMLFormElement>("login-hash-form").addEventListener("submit", async (event) => {
    event.preventDefault();
    renderPending(result, "Checking digest...");
    renderResult(
      result,
      await loginHashFlow(
        currentApi(),
        el<HTMLInputElement>("login-hash-user").value.trim(),
        el<HTMLInputElement>("login-hash-digest").value,
      ),
    );
  });
}

wireNav();
wireBaseUrl();
wireSignup();
wireLoginObject();
wireComputeHash();
wireLoginHash();
