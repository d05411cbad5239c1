// DOM construction helpers. Rendering is a direct projection of the view
// models in tabs.ts / panels.ts; nothing here invents data.

import type { FeatureGroup, EdgePanel, NodePanel } from "./panels.js";
import { namespaceLabel } from "./panels.js";
import type { ResultSection, TabModel } from "./tabs.js";
import type { ExternalLinks, IndexEntry } from "./types.js";

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

const LINK_LABELS: Record<string, string> = {
  pubmed: "PubMed",
  google: "Google",
  scholar: "Scholar",
  bing: "Bing",
};

export function linkCell(links: ExternalLinks): HTMLElement {
  const cell = el("span", { class: "links" });
  for (const key of ["pubmed", "google", "scholar", "bing"] as const) {
    const href = links[key];
    if (!href) continue;
    cell.append(
      el("a", { href, target: "_blank", rel: "noopener" }, [LINK_LABELS[key] ?? key]),
    );
  }
  return cell;
}

export function renderSection(section: ResultSection): HTMLElement {
  const table = el("table", { class: "results" });
  table.append(
    el("thead", {}, [el("tr", {}, [...section.header.map((h) => el("th", {}, [h])), el("th", {}, ["links"])])]),
  );
  const body = el("tbody");
  for (const row of section.rows) {
    const tr = el("tr");
    for (const cell of row.cells) tr.append(el("td", {}, [String(cell)]));
    tr.append(el("td", {}, [linkCell(row.links)]));
    body.append(tr);
  }
  table.append(body);
  return el("section", { class: "result-section" }, [
    el("h3", {}, [section.title]),
    section.rows.length ? table : el("p", { class: "empty" }, ["No entries."]),
  ]);
}

export function renderTab(tab: TabModel): HTMLElement {
  const container = el("div", { class: "tab-content" });
  for (const section of tab.sections) container.append(renderSection(section));
  return container;
}

function renderGroups(groups: FeatureGroup[]): HTMLElement {
  const wrap = el("div", { class: "feature-groups" });
  for (const group of groups) {
    const list = el("ul");
    for (const f of group.features) {
      list.append(el("li", {}, [`${f.name} `, el("span", { class: "weight" }, [f.weight.toFixed(3)])]));
    }
    wrap.append(
      el("div", { class: "feature-group" }, [
        el("h4", {}, [namespaceLabel(group.namespace)]),
        group.features.length ? list : el("p", { class: "empty" }, ["none"]),
      ]),
    );
  }
  return wrap;
}

export function renderNodePanel(panel: NodePanel): HTMLElement {
  return el("aside", { class: "panel" }, [
    el("h3", {}, [panel.title]),
    el("p", { class: "hint" }, ["Top features of this condition"]),
    renderGroups(panel.groups),
  ]);
}

export function renderEdgePanel(panel: EdgePanel): HTMLElement {
  return el("aside", { class: "panel" }, [
    el("h3", {}, [panel.title]),
    el("p", { class: "hint" }, [`What both conditions share (similarity ${panel.similarity.toFixed(3)})`]),
    renderGroups(panel.groups),
  ]);
}

export function renderEntryList(
  entries: IndexEntry[],
  onOpen: (entry: IndexEntry) => void,
): HTMLElement {
  const list = el("ul", { class: "analysis-list" });
  for (const entry of entries) {
    const link = el("a", { href: "#" }, [entry.query]);
    link.addEventListener("click", (ev) => {
      ev.preventDefault();
      onOpen(entry);
    });
    list.append(
      el("li", {}, [link, el("span", { class: `status status-${entry.status}` }, [entry.status])]),
    );
  }
  return list;
}

export function errorBanner(message: string): HTMLElement {
  return el("div", { class: "banner error", role: "alert" }, [message]);
}
