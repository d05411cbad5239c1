// Payload shapes of the analysis service API. The client renders these
// verbatim; it computes no statistics of its own.

export type AnalysisStatus = "queued" | "running" | "done" | "failed";

export interface IndexEntry {
  analysis_id: string;
  query: string;
  created_at: string;
  curated: boolean;
  status: AnalysisStatus;
}

export interface ExternalLinks {
  pubmed: string;
  google: string;
  scholar: string;
  bing: string;
}

export interface RankedItem {
  term: string;
  query_df: number;
  expected_df: number;
  p_value: number;
  score: number;
  links: ExternalLinks;
}

export interface PhraseItem {
  phrase: string;
  score: number;
  freq: number;
  links: ExternalLinks;
}

export interface EnrichmentItem {
  set_id: string;
  name: string;
  overlap: number;
  set_size: number;
  query_size: number;
  universe_size: number;
  p_value: number;
  q_value: number;
  overlap_genes: string[];
  links: ExternalLinks;
}

export interface AnalysisOutputs {
  genes: RankedItem[];
  terms: RankedItem[];
  phrases: PhraseItem[];
  pathways: EnrichmentItem[];
  processes: EnrichmentItem[];
}

export interface AnalysisView {
  analysis_id: string;
  query: string;
  created_at: string;
  curated: boolean;
  status: AnalysisStatus;
  error?: string;
  outputs?: AnalysisOutputs;
}

export interface FeatureEntry {
  name: string;
  weight: number;
}

export type NamespacedFeatures = Record<string, FeatureEntry[]>;

export interface NetworkNode {
  id: string;
  top_features: NamespacedFeatures;
}

export interface NetworkEdge {
  a: string;
  b: string;
  similarity: number;
  shared: NamespacedFeatures;
}

export interface NetworkDocument {
  threshold: number;
  namespaces: string[];
  nodes: NetworkNode[];
  edges: NetworkEdge[];
}

export type TabName = "terms" | "pathways" | "processes";

export type NetworkSelection =
  | { kind: "none" }
  | { kind: "node"; id: string }
  | { kind: "edge"; a: string; b: string };

export interface ViewState {
  activeAnalysisId: string | null;
  activeTab: TabName;
  selection: NetworkSelection;
}
