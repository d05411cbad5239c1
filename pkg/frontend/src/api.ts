// Thin typed wrapper over the service endpoints. `fetch` is injectable so
// tests can run without a server; every non-OK response becomes an
// ApiError that the UI must surface (no silent failures).

import type { AnalysisView, IndexEntry, NetworkDocument, NetworkEdge } from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`API error ${status}: ${detail}`);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = await response.json();
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  async submitAnalysis(query: string, params?: Record<string, unknown>): Promise<string> {
    const body = JSON.stringify({ query, params: params ?? null });
    const result = await this.request<{ analysis_id: string }>("/api/analyses", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body,
    });
    return result.analysis_id;
  }

  async listAnalyses(filter: "all" | "curated" = "all"): Promise<IndexEntry[]> {
    const result = await this.request<{ analyses: IndexEntry[] }>(
      `/api/analyses?filter=${filter}`,
    );
    return result.analyses;
  }

  getAnalysis(id: string): Promise<AnalysisView> {
    return this.request<AnalysisView>(`/api/analyses/${encodeURIComponent(id)}`);
  }

  exportUrl(id: string): string {
    return `${this.baseUrl}/api/analyses/${encodeURIComponent(id)}/export.zip`;
  }

  async listNetworks(): Promise<string[]> {
    const result = await this.request<{ networks: string[] }>("/api/networks");
    return result.networks;
  }

  getNetwork(name: string): Promise<NetworkDocument> {
    return this.request<NetworkDocument>(`/api/networks/${encodeURIComponent(name)}`);
  }

  getPair(name: string, a: string, b: string): Promise<NetworkEdge> {
    const qs = `a=${encodeURIComponent(a)}&b=${encodeURIComponent(b)}`;
    return this.request<NetworkEdge>(`/api/networks/${encodeURIComponent(name)}/pair?${qs}`);
  }
}
