/** Typed client for the casecalc evaluation service (/v1).
 *
 * The fetch function is injectable so tests can intercept every request and
 * serve recorded payloads; the UI never computes engine values itself.
 */

import type { GraphPayload, ReportPayload, Rule, ValuationPayload, ViewMode } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface ValuationParams {
  rule?: Rule;
  view?: ViewMode;
  thresholds?: string; // "r,a,g" cutoffs
}

export class ServiceError extends Error {
  constructor(readonly status: number, detail: unknown) {
    super(`service error ${status}: ${JSON.stringify(detail)}`);
  }
}

export class CaseServiceClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    const body = await response.json().catch(() => null);
    if (!response.ok) {
      throw new ServiceError(response.status, body?.detail ?? body);
    }
    return body as T;
  }

  private query(params: ValuationParams): string {
    const q = new URLSearchParams();
    if (params.rule) q.set("rule", params.rule);
    if (params.view) q.set("view", params.view);
    if (params.thresholds) q.set("thresholds", params.thresholds);
    const text = q.toString();
    return text ? `?${text}` : "";
  }

  async createSession(documentText: string): Promise<string> {
    const body = await this.request<{ session_id: string }>("/v1/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: documentText,
    });
    return body.session_id;
  }

  getValuation(sessionId: string, params: ValuationParams = {}): Promise<ValuationPayload> {
    return this.request(`/v1/sessions/${sessionId}/valuation${this.query(params)}`);
  }

  putOverride(
    sessionId: string,
    nodeId: string,
    value: number,
    note = "",
    params: ValuationParams = {},
  ): Promise<ValuationPayload> {
    return this.request(
      `/v1/sessions/${sessionId}/overrides/${encodeURIComponent(nodeId)}${this.query(params)}`,
      {
        method: "PUT",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ value, note }),
      },
    );
  }

  deleteOverride(
    sessionId: string,
    nodeId: string,
    params: ValuationParams = {},
  ): Promise<ValuationPayload> {
    return this.request(
      `/v1/sessions/${sessionId}/overrides/${encodeURIComponent(nodeId)}${this.query(params)}`,
      { method: "DELETE" },
    );
  }

  getGraph(sessionId: string): Promise<GraphPayload> {
    return this.request(`/v1/sessions/${sessionId}/graph`);
  }

  getReport(sessionId: string, params: ValuationParams = {}): Promise<ReportPayload> {
    return this.request(`/v1/sessions/${sessionId}/report${this.query(params)}`);
  }
}
