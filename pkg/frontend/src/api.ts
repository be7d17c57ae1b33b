// Typed client for the dialogue service HTTP API. The fetch function is
// injectable so tests can script the wire without a server.

export interface TurnDebug {
  cause: string;
  query_count: number;
  probe_count: number;
  match_count: number | null;
  changed_fields?: string[];
}

export interface BindingView {
  value: string | number;
  status: string;
  approx: boolean;
}

export interface TurnResponse {
  reply: string;
  state: string;
  sub_state: string | null;
  bindings: Record<string, BindingView>;
  turn: number;
  closed: boolean;
  debug: TurnDebug;
}

export interface CreateSessionResponse {
  session_id: string;
  greeting: string;
}

export interface TranscriptEntry {
  turn: number;
  utterance: string;
  state: string;
  sub_state: string | null;
  reply: string;
  queried: boolean;
  match_count: number | null;
  timestamp: number;
}

export interface TranscriptResponse {
  session_id: string;
  entries: TranscriptEntry[];
  context: {
    state: string;
    sub_state: string | null;
    bindings: Record<string, BindingView>;
    closed: boolean;
  };
}

export interface DomainInfo {
  name: string;
  label: string;
}

// Structural subset of fetch, satisfied by the browser and by test doubles.
export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

export class SessionClosedError extends Error {
  constructor() {
    super("session closed");
    this.name = "SessionClosedError";
  }
}

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number | null = null,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response;
    try {
      response = await this.fetchFn(this.baseUrl + path, {
        method,
        headers: body === undefined ? undefined : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError(`network failure: ${String(err)}`);
    }
    if (response.status === 409) {
      throw new SessionClosedError();
    }
    if (!response.ok) {
      throw new ApiError(`server answered ${response.status}`, response.status);
    }
    return (await response.json()) as T;
  }

  createSession(domain: string, backend = "local", seed = 0): Promise<CreateSessionResponse> {
    return this.request("POST", "/api/session", { domain, backend, seed });
  }

  sendUtterance(sessionId: string, text: string): Promise<TurnResponse> {
    return this.request("POST", `/api/session/${sessionId}/utterance`, { text });
  }

  fetchTranscript(sessionId: string): Promise<TranscriptResponse> {
    return this.request("GET", `/api/session/${sessionId}/transcript`);
  }

  domains(): Promise<{ domains: DomainInfo[] }> {
    return this.request("GET", "/api/domains");
  }
}
