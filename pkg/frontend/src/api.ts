/**
 * Thin typed client for the judgment service. All state interaction
 * goes through this module; the UI never touches files or any other
 * backend directly.
 */

import type {
  AgreementPayload,
  PoolPayload,
  SubmissionAck,
  TieResolutionAck,
  TieRow,
  TopicSummary,
} from "./contract";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }

  get isConflict(): boolean {
    return this.status === 409;
  }
}

export interface ApiOptions {
  baseUrl: string;
  token: string;
  /** injectable for tests and non-browser environments */
  fetchFn?: typeof fetch;
}

export class JudgeApi {
  private readonly baseUrl: string;
  private readonly token: string;
  private readonly fetchFn: typeof fetch;

  constructor(options: ApiOptions) {
    this.baseUrl = options.baseUrl.replace(/\/+$/, "");
    this.token = options.token;
    this.fetchFn = options.fetchFn ?? fetch;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      ...init,
      headers: {
        Authorization: `Bearer ${this.token}`,
        "Content-Type": "application/json",
        ...(init?.headers ?? {}),
      },
    });
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      const detail =
        typeof body?.detail === "string" ? body.detail : response.statusText;
      throw new ApiError(response.status, detail);
    }
    return body as T;
  }

  topics(): Promise<{ assessor: string; topics: TopicSummary[] }> {
    return this.request("/topics");
  }

  pool(topicId: number): Promise<PoolPayload> {
    return this.request(`/topics/${topicId}/pool`);
  }

  submitJudgments(
    topicId: number,
    grades: Record<string, number>,
    idempotencyKey: string,
  ): Promise<SubmissionAck> {
    return this.request(`/topics/${topicId}/judgments`, {
      method: "POST",
      body: JSON.stringify({ grades, idempotency_key: idempotencyKey }),
    });
  }

  ties(offset = 0, limit = 1000): Promise<{ count: number; ties: TieRow[] }> {
    return this.request(`/ties?offset=${offset}&limit=${limit}`);
  }

  resolveTie(pair: string, grade: number): Promise<TieResolutionAck> {
    return this.request(`/ties/${encodeURIComponent(pair)}/resolution`, {
      method: "POST",
      body: JSON.stringify({ grade }),
    });
  }

  agreement(): Promise<AgreementPayload> {
    return this.request("/agreement");
  }
}
