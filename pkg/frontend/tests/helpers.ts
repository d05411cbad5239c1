// A tiny in-memory stand-in for the analysis service, driven through the
// injectable fetch of ApiClient.

import type {
  AnalysisView,
  IndexEntry,
  NetworkDocument,
} from "../src/types.js";

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

const LINKS = {
  pubmed: "https://pubmed.ncbi.nlm.nih.gov/?term=x",
  google: "https://www.google.com/search?q=x",
  scholar: "https://scholar.google.com/scholar?q=x",
  bing: "https://www.bing.com/search?q=x",
};

export function doneView(id: string, query: string): AnalysisView {
  return {
    analysis_id: id,
    query,
    created_at: "2024-05-01T10:00:00Z",
    curated: false,
    status: "done",
    outputs: {
      genes: [
        { term: "TP53", query_df: 4, expected_df: 0.4, p_value: 0.002, score: 2.7, links: LINKS },
        { term: "BRCA1", query_df: 3, expected_df: 0.5, p_value: 0.004, score: 2.4, links: LINKS },
      ],
      terms: [
        { term: "plaqu", query_df: 4, expected_df: 0.1, p_value: 0.001, score: 3.0, links: LINKS },
      ],
      phrases: [{ phrase: "plaque formation", score: 4.0, freq: 3, links: LINKS }],
      pathways: [
        {
          set_id: "PW_TARGET",
          name: "planted pair",
          overlap: 2,
          set_size: 2,
          query_size: 2,
          universe_size: 12,
          p_value: 0.015,
          q_value: 0.03,
          overlap_genes: ["BRCA1", "TP53"],
          links: LINKS,
        },
      ],
      processes: [],
    },
  };
}

export function demoNetwork(): NetworkDocument {
  return {
    threshold: 0.3,
    namespaces: ["gene", "term", "set"],
    nodes: [
      {
        id: "CondA",
        top_features: {
          gene: [
            { name: "TP53", weight: 3.1 },
            { name: "BRCA1", weight: 2.2 },
          ],
          term: [{ name: "plaqu", weight: 1.5 }],
          set: [],
        },
      },
      {
        id: "CondB",
        top_features: {
          gene: [{ name: "TP53", weight: 2.0 }],
          term: [],
          set: [{ name: "PW_TARGET", weight: 1.0 }],
        },
      },
      { id: "CondC", top_features: { gene: [{ name: "GBA", weight: 4.0 }], term: [], set: [] } },
    ],
    edges: [
      {
        a: "CondA",
        b: "CondB",
        similarity: 0.82,
        shared: { gene: [{ name: "TP53", weight: 2.0 }], term: [], set: [] },
      },
    ],
  };
}

export interface FakeServer {
  fetch: (input: string, init?: RequestInit) => Promise<Response>;
  requests: string[];
  entries: IndexEntry[];
}

// One analysis ("plaque") is already cached as done; unknown queries
// enqueue a new job that completes after `pollsUntilDone` status reads.
export function makeFakeServer(options: { pollsUntilDone?: number } = {}): FakeServer {
  const pollsUntilDone = options.pollsUntilDone ?? 2;
  const entries: IndexEntry[] = [
    {
      analysis_id: "cached0000000001",
      query: "plaque",
      created_at: "2024-05-01T10:00:00Z",
      curated: false,
      status: "done",
    },
  ];
  const views = new Map<string, AnalysisView>([
    ["cached0000000001", doneView("cached0000000001", "plaque")],
  ]);
  const pollCount = new Map<string, number>();
  const requests: string[] = [];
  let counter = 1;

  async function fakeFetch(input: string, init?: RequestInit): Promise<Response> {
    requests.push(`${init?.method ?? "GET"} ${input}`);
    const url = new URL(input, "http://test.local");

    if (url.pathname === "/api/analyses" && init?.method === "POST") {
      const body = JSON.parse(String(init.body)) as { query: string };
      if (!body.query || body.query.startsWith("(")) {
        return jsonResponse({ detail: "unbalanced parenthesis" }, 400);
      }
      const existing = entries.find((e) => e.query === body.query);
      if (existing) {
        return jsonResponse({ analysis_id: existing.analysis_id });
      }
      counter += 1;
      const id = `job${String(counter).padStart(13, "0")}`;
      entries.push({
        analysis_id: id,
        query: body.query,
        created_at: "2024-05-02T10:00:00Z",
        curated: false,
        status: "queued",
      });
      pollCount.set(id, 0);
      return jsonResponse({ analysis_id: id });
    }

    if (url.pathname === "/api/analyses") {
      const filter = url.searchParams.get("filter") ?? "all";
      const subset = filter === "curated" ? entries.filter((e) => e.curated) : entries;
      return jsonResponse({ analyses: subset });
    }

    const analysisMatch = url.pathname.match(/^\/api\/analyses\/([^/]+)$/);
    if (analysisMatch) {
      const id = analysisMatch[1];
      const entry = entries.find((e) => e.analysis_id === id);
      if (!entry) return jsonResponse({ detail: "unknown analysis" }, 404);
      if (views.has(id)) return jsonResponse(views.get(id));
      const polls = (pollCount.get(id) ?? 0) + 1;
      pollCount.set(id, polls);
      if (polls >= pollsUntilDone) {
        entry.status = "done";
        const view = doneView(id, entry.query);
        views.set(id, view);
        return jsonResponse(view);
      }
      entry.status = "running";
      return jsonResponse({
        analysis_id: id,
        query: entry.query,
        created_at: entry.created_at,
        curated: false,
        status: polls === 1 ? "queued" : "running",
      });
    }

    if (url.pathname === "/api/networks") {
      return jsonResponse({ networks: ["demo"] });
    }
    if (url.pathname === "/api/networks/demo") {
      return jsonResponse(demoNetwork());
    }
    if (url.pathname === "/api/networks/demo/pair") {
      const a = url.searchParams.get("a");
      const b = url.searchParams.get("b");
      const edge = demoNetwork().edges.find(
        (e) => (e.a === a && e.b === b) || (e.a === b && e.b === a),
      );
      if (!edge) return jsonResponse({ detail: "no such edge" }, 404);
      return jsonResponse(edge);
    }
    return jsonResponse({ detail: "not found" }, 404);
  }

  return { fetch: fakeFetch, requests, entries };
}
