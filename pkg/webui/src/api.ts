// Typed client for the planning service. Every successful response passes
// through an interceptor hook so tests (and the traceability audit) can match
// displayed numbers against what the server actually sent. The plans call is
// cancellable: issuing a new one aborts the one in flight.

import type {
  CatalogResponse,
  ChatResponse,
  FollowupsResponse,
  HealthResponse,
  PlansResponse,
  PredictResponse,
  Profile,
  ServiceErrorBody,
} from "./types.js";

export class ServiceError extends Error {
  constructor(
    public readonly status: number,
    public readonly body: ServiceErrorBody,
  ) {
    super(body.message ?? `service error ${status}`);
  }

  get field(): string | undefined {
    return this.body.field;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface InterceptedResponse {
  method: string;
  path: string;
  body: unknown;
}

export class ApiClient {
  private planAbort: AbortController | null = null;
  readonly intercepted: InterceptedResponse[] = [];

  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(method: string, path: string, payload?: unknown, signal?: AbortSignal): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: payload === undefined ? undefined : { "content-type": "application/json" },
      body: payload === undefined ? undefined : JSON.stringify(payload),
      signal,
    });
    if (!response.ok) {
      let body: ServiceErrorBody = {};
      try {
        body = (await response.json()) as ServiceErrorBody;
      } catch {
        body = { message: response.statusText };
      }
      throw new ServiceError(response.status, body);
    }
    const contentType = response.headers.get("content-type") ?? "";
    const body = contentType.includes("application/json")
      ? await response.json()
      : await response.text();
    this.intercepted.push({ method, path, body });
    return body as T;
  }

  health(): Promise<HealthResponse> {
    return this.request("GET", "/health");
  }

  catalog(): Promise<CatalogResponse> {
    return this.request("GET", "/catalog");
  }

  predict(profile: Profile): Promise<PredictResponse> {
    return this.request("POST", "/predict", { profile });
  }

  /**
   * Fetch the plan frontier; a newer call aborts the in-flight one so a slow
   * early response can never land after (and overwrite) a fresh one.
   */
  plans(profile: Profile, categories: string[] | null, budgetEur: number | null): Promise<PlansResponse> {
    this.planAbort?.abort();
    this.planAbort = new AbortController();
    return this.request(
      "POST",
      "/plans",
      { profile, categories, budget_eur: budgetEur },
      this.planAbort.signal,
    );
  }

  planReport(planId: string): Promise<string> {
    return this.request("GET", `/plans/${planId}/report`);
  }

  followups(question: string): Promise<FollowupsResponse> {
    return this.request("POST", "/followups", { question });
  }

  chat(message: string): Promise<ChatResponse> {
    return this.request("POST", "/chat", { message });
  }
}

export function isAbortError(err: unknown): boolean {
  return err instanceof DOMException
    ? err.name === "AbortError"
    : err instanceof Error && err.name === "AbortError";
}
