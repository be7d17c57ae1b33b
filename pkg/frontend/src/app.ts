// DOM wiring: renders a UiSessionView and funnels events through the pure
// update functions in state.ts. One active request per session; the input is
// disabled while a turn is in flight or after goodbye.

import { ApiClient } from "./api.js";
import {
  UiSessionView,
  initialView,
  inputDisabled,
  sendUtterance,
  toggleDebug,
  viewFromTranscript,
} from "./state.js";

const SESSION_KEY = "dialogkit.session";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

export class ChatApp {
  private view: UiSessionView | null = null;
  private client: ApiClient;

  constructor(baseUrl: string) {
    this.client = new ApiClient(baseUrl, (url, init) => fetch(url, init));
  }

  async start(): Promise<void> {
    const saved = window.sessionStorage.getItem(SESSION_KEY);
    if (saved) {
      try {
        // Reload: rebuild the whole view from the server transcript.
        this.view = viewFromTranscript(await this.client.fetchTranscript(saved));
        this.render();
        return;
      } catch {
        window.sessionStorage.removeItem(SESSION_KEY);
      }
    }
    await this.newSession();
  }

  async newSession(): Promise<void> {
    const domain = (el<HTMLSelectElement>("domain").value || "flights").trim();
    const created = await this.client.createSession(domain);
    window.sessionStorage.setItem(SESSION_KEY, created.session_id);
    this.view = initialView(created.session_id, created.greeting);
    this.render();
  }

  async send(): Promise<void> {
    if (!this.view) return;
    const input = el<HTMLInputElement>("utterance");
    const text = input.value;
    if (!text.trim() || inputDisabled(this.view)) return;
    input.value = "";
    this.view = beginRender(this.view, this);
    this.view = await sendUtterance(this.view, text, this.client);
    this.render();
  }

  toggle(): void {
    if (!this.view) return;
    this.view = toggleDebug(this.view);
    this.render();
  }

  render(): void {
    const view = this.view;
    if (!view) return;
    const log = el<HTMLDivElement>("messages");
    log.innerHTML = "";
    for (const message of view.messages) {
      const bubble = document.createElement("div");
      bubble.className = `msg ${message.speaker}`;
      bubble.textContent = message.text;
      log.appendChild(bubble);
    }
    log.scrollTop = log.scrollHeight;

    const banner = el<HTMLDivElement>("error-banner");
    banner.hidden = view.error === null;
    banner.textContent = view.error ?? "";

    const input = el<HTMLInputElement>("utterance");
    input.disabled = inputDisabled(view);
    input.placeholder = view.closed ? "Session ended. Start a new one." : "Say something...";
    el<HTMLButtonElement>("send").disabled = inputDisabled(view);
    el<HTMLButtonElement>("restart").hidden = !view.closed;

    const panel = el<HTMLDivElement>("debug-panel");
    panel.hidden = !view.debugVisible;
    el<HTMLSpanElement>("state").textContent =
      view.currentState + (view.subState ? ` / ${view.subState}` : "");
    el<HTMLSpanElement>("cause").textContent = view.lastCause || "-";
    el<HTMLSpanElement>("queries").textContent = `${view.queryCount} + ${view.probeCount} probes`;
    const table = el<HTMLTableSectionElement>("bindings");
    table.innerHTML = "";
    for (const [name, binding] of Object.entries(view.bindings)) {
      const row = table.insertRow();
      row.insertCell().textContent = name;
      row.insertCell().textContent =
        `${binding.value}${binding.approx ? " (approx)" : ""} [${binding.status}]`;
    }
  }
}

function beginRender(view: UiSessionView, app: ChatApp): UiSessionView {
  const pending = { ...view, inFlight: true };
  // Show the disabled state immediately while the request runs.
  queueMicrotask(() => app.render());
  return pending;
}

export function main(): void {
  // Same-origin by default; ?api=http://host:port points elsewhere (the
  // service sends permissive CORS headers).
  const base = new URLSearchParams(window.location.search).get("api") ?? "";
  const app = new ChatApp(base);
  el<HTMLButtonElement>("send").addEventListener("click", () => void app.send());
  el<HTMLInputElement>("utterance").addEventListener("keydown", (event) => {
    if (event.key === "Enter") void app.send();
  });
  el<HTMLButtonElement>("toggle-debug").addEventListener("click", () => app.toggle());
  el<HTMLButtonElement>("restart").addEventListener("click", () => void app.newSession());
  el<HTMLSelectElement>("domain").addEventListener("change", () => void app.newSession());
  void app.start();
}

if (typeof document !== "undefined") {
  main();
}
