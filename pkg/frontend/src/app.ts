// DOM-free application logic: submissions, homepage lists, view state.

import type { ApiClient } from "./api.js";
import type { AnalysisView, IndexEntry, NetworkSelection, TabName, ViewState } from "./types.js";

export interface SubmitOutcome {
  analysisId: string;
  cached: boolean; // already done at submit time: no new job was started
  view: AnalysisView;
}

export async function submitQuery(client: ApiClient, query: string): Promise<SubmitOutcome> {
  const analysisId = await client.submitAnalysis(query);
  const view = await client.getAnalysis(analysisId);
  return { analysisId, cached: view.status === "done", view };
}

export interface HomepageLists {
  curated: IndexEntry[];
  users: IndexEntry[];
}

// the homepage's two lists: selected (curated) queries and user history
export function splitLists(entries: IndexEntry[]): HomepageLists {
  return {
    curated: entries.filter((e) => e.curated),
    users: entries.filter((e) => !e.curated),
  };
}

export function initialViewState(): ViewState {
  return { activeAnalysisId: null, activeTab: "terms", selection: { kind: "none" } };
}

export function withActiveAnalysis(state: ViewState, analysisId: string): ViewState {
  return { ...state, activeAnalysisId: analysisId, activeTab: "terms" };
}

export function withTab(state: ViewState, tab: TabName): ViewState {
  return { ...state, activeTab: tab };
}

export function withSelection(state: ViewState, selection: NetworkSelection): ViewState {
  return { ...state, selection };
}

export function statusLabel(view: AnalysisView): string {
  switch (view.status) {
    case "queued":
      return "Queued…";
    case "running":
      return "Running analysis…";
    case "done":
      return "Done";
    case "failed":
      return `Failed: ${view.error ?? "unknown error"}`;
  }
}
