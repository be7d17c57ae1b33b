// The scripted-session mirror test (and the view-model behaviors around it).
// The fixture holds genuine wire payloads recorded from the dialogue server
// (scripts/record_ui_fixture.py), so these tests pin the UI to real
// responses: the message list must mirror the server transcript exactly and
// the panel must track each turn response.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { ApiClient, FetchLike, TranscriptResponse, TurnResponse } from "../src/api.js";
import {
  Message,
  UiSessionView,
  applyTurn,
  initialView,
  inputDisabled,
  sendUtterance,
  toggleDebug,
  viewFromTranscript,
} from "../src/state.js";

interface Fixture {
  create: { request: unknown; response: { session_id: string; greeting: string } };
  turns: { text: string; response: TurnResponse }[];
  transcript: TranscriptResponse;
  closed_status: number;
}

const here = dirname(fileURLToPath(import.meta.url));
const fixture: Fixture = JSON.parse(readFileSync(join(here, "fixtures", "session6.json"), "utf-8"));

function jsonResponse(body: unknown, status = 200) {
  return { ok: status < 400, status, json: async () => body };
}

/** A fetch double that serves the recorded session in order. */
function fixtureFetch(): FetchLike {
  let turn = 0;
  return async (url, init) => {
    if (url.endsWith("/utterance") && init?.method === "POST") {
      if (turn >= fixture.turns.length) {
        return jsonResponse({ error: "session_closed", detail: "ended" }, fixture.closed_status);
      }
      const body = JSON.parse(init.body ?? "{}") as { text: string };
      expect(body.text).toBe(fixture.turns[turn].text);
      return jsonResponse(fixture.turns[turn++].response);
    }
    if (url.endsWith("/transcript")) {
      return jsonResponse(fixture.transcript);
    }
    throw new Error(`unexpected url ${url}`);
  };
}

function transcriptMessages(transcript: TranscriptResponse): Message[] {
  const messages: Message[] = [];
  for (const entry of transcript.entries) {
    if (entry.utterance !== "") messages.push({ speaker: "user", text: entry.utterance });
    messages.push({ speaker: "system", text: entry.reply });
  }
  return messages;
}

describe("scripted six-turn session (acceptance: UI mirror)", () => {
  it("mirrors the server transcript and tracks every turn response", async () => {
    const client = new ApiClient("", fixtureFetch());
    let view = initialView(fixture.create.response.session_id, fixture.create.response.greeting);

    for (const turn of fixture.turns) {
      view = await sendUtterance(view, turn.text, client);
      // the panel reflects exactly the turn response
      expect(view.currentState).toBe(turn.response.state);
      expect(view.subState).toBe(turn.response.sub_state);
      expect(view.bindings).toEqual(turn.response.bindings);
      expect(view.lastCause).toBe(turn.response.debug.cause);
      expect(view.queryCount).toBe(turn.response.debug.query_count);
      // the last two messages are this exchange
      expect(view.messages.at(-2)).toEqual({ speaker: "user", text: turn.text });
      expect(view.messages.at(-1)).toEqual({ speaker: "system", text: turn.response.reply });
    }

    // message list identical to the server transcript
    expect(view.messages).toEqual(transcriptMessages(fixture.transcript));
    // the goodbye closed the session: input disabled
    expect(view.closed).toBe(true);
    expect(inputDisabled(view)).toBe(true);
  });

  it("reconstructs the same view after a reload", async () => {
    const client = new ApiClient("", fixtureFetch());
    let view = initialView(fixture.create.response.session_id, fixture.create.response.greeting);
    for (const turn of fixture.turns) {
      view = await sendUtterance(view, turn.text, client);
    }
    const reloaded = viewFromTranscript(fixture.transcript);
    expect(reloaded.messages).toEqual(view.messages);
    expect(reloaded.currentState).toBe(view.currentState);
    expect(reloaded.subState).toBe(view.subState);
    expect(reloaded.bindings).toEqual(view.bindings);
    expect(reloaded.closed).toBe(view.closed);
  });
});

describe("send_utterance error contracts", () => {
  const base = () => initialView("s1", "Hello.");

  it("network failure shows a retry banner and appends nothing", async () => {
    const failing: FetchLike = async () => {
      throw new Error("connection refused");
    };
    const view = await sendUtterance(base(), "hello", new ApiClient("", failing));
    expect(view.error).toMatch(/Try again/);
    expect(view.messages).toHaveLength(1); // just the greeting
    expect(view.inFlight).toBe(false);
    expect(inputDisabled(view)).toBe(false); // the user may retry
  });

  it("a 409 marks the session closed and disables input", async () => {
    const gone: FetchLike = async () => jsonResponse({ error: "session_closed" }, 409);
    const view = await sendUtterance(base(), "hello", new ApiClient("", gone));
    expect(view.closed).toBe(true);
    expect(inputDisabled(view)).toBe(true);
    expect(view.messages).toHaveLength(1);
  });

  it("one request at a time: an in-flight view rejects another send", async () => {
    const never: FetchLike = async () => jsonResponse({}, 200);
    const inFlight = { ...base(), inFlight: true };
    const view = await sendUtterance(inFlight, "hello", new ApiClient("", never));
    expect(view).toBe(inFlight); // unchanged, no request made
  });

  it("blank input is ignored", async () => {
    const view = await sendUtterance(base(), "   ", new ApiClient("", fixtureFetch()));
    expect(view.messages).toHaveLength(1);
  });
});

describe("debug panel", () => {
  it("toggling twice restores the visual state", () => {
    const view = initialView("s1", "Hello.");
    expect(toggleDebug(toggleDebug(view)).debugVisible).toBe(view.debugVisible);
  });

  it("a hidden panel still tracks state, so reopening is current", async () => {
    const client = new ApiClient("", fixtureFetch());
    let view = initialView(fixture.create.response.session_id, fixture.create.response.greeting);
    view = toggleDebug(view); // hide
    for (const turn of fixture.turns.slice(0, 3)) {
      view = await sendUtterance(view, turn.text, client);
    }
    expect(view.debugVisible).toBe(false);
    const reopened = toggleDebug(view);
    expect(reopened.currentState).toBe(fixture.turns[2].response.state);
    expect(reopened.bindings).toEqual(fixture.turns[2].response.bindings);
  });

  it("a fresh session shows INITIAL and no bindings", () => {
    const view = initialView("s1", "Hello.");
    expect(view.currentState).toBe("INITIAL");
    expect(view.bindings).toEqual({});
    expect(view.debugVisible).toBe(true);
  });
});

describe("applyTurn", () => {
  it("appends the user message then the system reply, in order", () => {
    const response = fixture.turns[0].response;
    const view = applyTurn(initialView("s1", "Hi."), "question", response);
    expect(view.messages.map((m) => m.speaker)).toEqual(["system", "user", "system"]);
    expect(view.messages[2].text).toBe(response.reply);
  });
});
