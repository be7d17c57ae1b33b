// The session view model and its pure update functions. Everything the DOM
// layer renders is derived from server responses through these; nothing here
// touches the document, so the mirror invariants are testable headlessly.

import {
  ApiClient,
  ApiError,
  BindingView,
  SessionClosedError,
  TranscriptResponse,
  TurnResponse,
} from "./api.js";

export type Speaker = "user" | "system";

export interface Message {
  speaker: Speaker;
  text: string;
}

export interface UiSessionView {
  sessionId: string;
  messages: Message[];
  currentState: string;
  subState: string | null;
  bindings: Record<string, BindingView>;
  lastCause: string;
  queryCount: number;
  probeCount: number;
  debugVisible: boolean;
  closed: boolean;
  inFlight: boolean;
  error: string | null; // retry banner text, null when hidden
}

export function initialView(sessionId: string, greeting: string): UiSessionView {
  return {
    sessionId,
    messages: [{ speaker: "system", text: greeting }],
    currentState: "INITIAL",
    subState: null,
    bindings: {},
    lastCause: "",
    queryCount: 0,
    probeCount: 0,
    debugVisible: true,
    closed: false,
    inFlight: false,
    error: null,
  };
}

export function inputDisabled(view: UiSessionView): boolean {
  return view.closed || view.inFlight;
}

export function beginSend(view: UiSessionView): UiSessionView {
  return { ...view, inFlight: true, error: null };
}

export function applyTurn(view: UiSessionView, text: string, response: TurnResponse): UiSessionView {
  return {
    ...view,
    messages: [
      ...view.messages,
      { speaker: "user", text },
      { speaker: "system", text: response.reply },
    ],
    currentState: response.state,
    subState: response.sub_state,
    bindings: response.bindings,
    lastCause: response.debug.cause,
    queryCount: response.debug.query_count,
    probeCount: response.debug.probe_count,
    closed: response.closed,
    inFlight: false,
    error: null,
  };
}

export function applyFailure(view: UiSessionView, message: string): UiSessionView {
  // No message is appended: the utterance did not reach the dialogue.
  return { ...view, inFlight: false, error: message };
}

export function applyClosed(view: UiSessionView): UiSessionView {
  return { ...view, inFlight: false, closed: true, error: null };
}

export function toggleDebug(view: UiSessionView): UiSessionView {
  return { ...view, debugVisible: !view.debugVisible };
}

export async function sendUtterance(
  view: UiSessionView,
  text: string,
  client: ApiClient,
): Promise<UiSessionView> {
  if (inputDisabled(view) || !text.trim()) {
    return view; // one request at a time; closed sessions take no input
  }
  const pending = beginSend(view);
  try {
    const response = await client.sendUtterance(view.sessionId, text);
    return applyTurn(pending, text, response);
  } catch (err) {
    if (err instanceof SessionClosedError) {
      return applyClosed(pending);
    }
    const message = err instanceof ApiError ? err.message : String(err);
    return applyFailure(pending, `Could not reach the service (${message}). Try again.`);
  }
}

export function viewFromTranscript(transcript: TranscriptResponse): UiSessionView {
  // A full reload: messages mirror the server transcript order exactly, and
  // the panel comes from the session's current context.
  const messages: Message[] = [];
  for (const entry of transcript.entries) {
    if (entry.utterance !== "") {
      messages.push({ speaker: "user", text: entry.utterance });
    }
    messages.push({ speaker: "system", text: entry.reply });
  }
  // The panel shows the last turn's decision, exactly as the live view did;
  // bindings and the closed flag come from the session's current context.
  const last = transcript.entries[transcript.entries.length - 1];
  return {
    sessionId: transcript.session_id,
    messages,
    currentState: last ? last.state : transcript.context.state,
    subState: last ? last.sub_state : transcript.context.sub_state,
    bindings: transcript.context.bindings,
    lastCause: "",
    queryCount: last && last.queried ? 1 : 0,
    probeCount: 0,
    debugVisible: true,
    closed: transcript.context.closed,
    inFlight: false,
    error: null,
  };
}
