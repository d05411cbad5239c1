// Side-panel view models for network clicks. Pure passthrough of API
// payloads: the panel shows exactly what the document/endpoint carries.

import type {
  NamespacedFeatures,
  NetworkDocument,
  NetworkEdge,
  NetworkNode,
} from "./types.js";

export interface FeatureGroup {
  namespace: string;
  features: { name: string; weight: number }[];
}

export interface NodePanel {
  kind: "node";
  title: string;
  groups: FeatureGroup[];
}

export interface EdgePanel {
  kind: "edge";
  title: string;
  similarity: number;
  groups: FeatureGroup[];
}

const NAMESPACE_LABELS: Record<string, string> = {
  gene: "Genes",
  term: "Terms",
  set: "Pathways & processes",
};

export function namespaceLabel(ns: string): string {
  return NAMESPACE_LABELS[ns] ?? ns;
}

function toGroups(features: NamespacedFeatures): FeatureGroup[] {
  // preserve payload order within each namespace; fixed namespace order
  return Object.keys(features)
    .sort()
    .map((namespace) => ({
      namespace,
      features: features[namespace].map((f) => ({ name: f.name, weight: f.weight })),
    }));
}

export function findNode(doc: NetworkDocument, nodeId: string): NetworkNode | undefined {
  return doc.nodes.find((n) => n.id === nodeId);
}

export function nodePanel(doc: NetworkDocument, nodeId: string): NodePanel {
  const node = findNode(doc, nodeId);
  if (!node) throw new Error(`node ${nodeId} not in network document`);
  return { kind: "node", title: node.id, groups: toGroups(node.top_features) };
}

export function edgePanel(edge: NetworkEdge): EdgePanel {
  return {
    kind: "edge",
    title: `${edge.a} — ${edge.b}`,
    similarity: edge.similarity,
    groups: toGroups(edge.shared),
  };
}
