// Result-page view model: the three tabs built from one analysis payload.
// Tab 1 carries genes, terms, and phrases; tabs 2 and 3 the enrichment
// collections. Rows keep the API's order and links untouched.

import type { AnalysisView, ExternalLinks, TabName } from "./types.js";

export interface ResultRow {
  cells: (string | number)[];
  links: ExternalLinks;
}

export interface ResultSection {
  title: string;
  header: string[];
  rows: ResultRow[];
}

export interface TabModel {
  name: TabName;
  label: string;
  sections: ResultSection[];
}

const P_DIGITS = 4;

function fmt(x: number): string {
  if (x !== 0 && Math.abs(x) < 10 ** -P_DIGITS) return x.toExponential(2);
  return x.toFixed(P_DIGITS);
}

export function buildTabs(view: AnalysisView): TabModel[] {
  if (view.status !== "done" || !view.outputs) {
    throw new Error(`analysis ${view.analysis_id} is not done`);
  }
  const out = view.outputs;
  const ranked = (title: string, items: typeof out.genes): ResultSection => ({
    title,
    header: ["term", "query df", "expected df", "p-value", "score"],
    rows: items.map((r) => ({
      cells: [r.term, r.query_df, fmt(r.expected_df), fmt(r.p_value), fmt(r.score)],
      links: r.links,
    })),
  });
  const enrichment = (title: string, items: typeof out.pathways): ResultSection => ({
    title,
    header: ["set", "name", "overlap", "set size", "p-value", "q-value"],
    rows: items.map((e) => ({
      cells: [e.set_id, e.name, e.overlap, e.set_size, fmt(e.p_value), fmt(e.q_value)],
      links: e.links,
    })),
  });
  return [
    {
      name: "terms",
      label: "Key terms & phrases",
      sections: [
        ranked("Genes", out.genes),
        ranked("Terms", out.terms),
        {
          title: "Key phrases",
          header: ["phrase", "score", "freq"],
          rows: out.phrases.map((p) => ({
            cells: [p.phrase, fmt(p.score), p.freq],
            links: p.links,
          })),
        },
      ],
    },
    { name: "pathways", label: "Pathways", sections: [enrichment("Pathways", out.pathways)] },
    { name: "processes", label: "Processes", sections: [enrichment("Processes", out.processes)] },
  ];
}
