// Browser wiring: homepage (query box + two lists), results view with
// three tabs, and the interactive network explorer.

import { ApiClient, ApiError } from "./api.js";
import {
  initialViewState,
  splitLists,
  statusLabel,
  submitQuery,
  withActiveAnalysis,
  withSelection,
  withTab,
} from "./app.js";
import { layoutNetwork } from "./force.js";
import { edgePanel, nodePanel } from "./panels.js";
import { pollAnalysis } from "./polling.js";
import { buildTabs } from "./tabs.js";
import {
  clear,
  el,
  errorBanner,
  renderEdgePanel,
  renderEntryList,
  renderNodePanel,
  renderTab,
} from "./render.js";
import type { AnalysisView, NetworkDocument, TabName } from "./types.js";

const client = new ApiClient("");
let state = initialViewState();

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function showError(err: unknown): void {
  const box = byId("messages");
  clear(box);
  const message = err instanceof ApiError ? err.message : String(err);
  box.append(errorBanner(message));
}

function clearError(): void {
  clear(byId("messages"));
}

async function refreshLists(): Promise<void> {
  const entries = await client.listAnalyses("all");
  const lists = splitLists(entries);
  const curatedBox = byId("curated-list");
  const usersBox = byId("users-list");
  clear(curatedBox);
  clear(usersBox);
  const open = (entry: { analysis_id: string }) => {
    void openAnalysis(entry.analysis_id);
  };
  curatedBox.append(
    lists.curated.length
      ? renderEntryList(lists.curated, open)
      : el("p", { class: "empty" }, ["No curated analyses yet."]),
  );
  usersBox.append(
    lists.users.length
      ? renderEntryList(lists.users, open)
      : el("p", { class: "empty" }, ["No analyses yet — run one above."]),
  );
}

function renderStatus(view: AnalysisView): void {
  const box = byId("status");
  clear(box);
  box.append(el("p", { class: `status status-${view.status}` }, [statusLabel(view)]));
}

function renderResults(view: AnalysisView): void {
  state = withActiveAnalysis(state, view.analysis_id);
  const box = byId("results");
  clear(box);
  if (view.status !== "done" || !view.outputs) {
    renderStatus(view);
    return;
  }
  const tabs = buildTabs(view);
  const nav = el("nav", { class: "tabs" });
  const content = el("div", { class: "tab-body" });

  const activate = (name: TabName) => {
    state = withTab(state, name);
    clear(content);
    const tab = tabs.find((t) => t.name === name);
    if (tab) content.append(renderTab(tab));
    for (const button of Array.from(nav.children) as HTMLElement[]) {
      button.classList.toggle("active", button.dataset.tab === name);
    }
  };

  for (const tab of tabs) {
    const button = el("button", { "data-tab": tab.name }, [tab.label]);
    button.addEventListener("click", () => activate(tab.name));
    nav.append(button);
  }

  const exportLink = el("a", { href: client.exportUrl(view.analysis_id), class: "export" }, [
    "Download ZIP",
  ]);
  box.append(el("h2", {}, [view.query]), nav, exportLink, content);
  activate(state.activeTab);
}

async function openAnalysis(analysisId: string): Promise<void> {
  clearError();
  try {
    const view = await client.getAnalysis(analysisId);
    if (view.status === "done") {
      renderResults(view);
      return;
    }
    renderStatus(view);
    const handle = pollAnalysis(client, analysisId, { onUpdate: renderStatus });
    const finalView = await handle.done;
    renderResults(finalView);
    await refreshLists();
  } catch (err) {
    showError(err);
  }
}

async function onSubmit(event: Event): Promise<void> {
  event.preventDefault();
  clearError();
  const input = byId("query-input") as HTMLInputElement;
  const query = input.value.trim();
  if (!query) return;
  try {
    const outcome = await submitQuery(client, query);
    await refreshLists();
    if (outcome.cached) {
      renderResults(outcome.view); // cached result: shown immediately
    } else {
      await openAnalysis(outcome.analysisId);
    }
  } catch (err) {
    showError(err);
  }
}

// ----------------------------------------------------------------- network

async function loadNetworkNames(): Promise<void> {
  const select = byId("network-select") as HTMLSelectElement;
  const names = await client.listNetworks();
  clear(select);
  select.append(el("option", { value: "" }, ["choose a network…"]));
  for (const name of names) select.append(el("option", { value: name }, [name]));
}

function renderNetwork(name: string, doc: NetworkDocument): void {
  const box = byId("network-view");
  clear(box);
  const panelBox = byId("network-panel");
  clear(panelBox);
  state = withSelection(state, { kind: "none" });

  if (doc.nodes.length === 0) {
    box.append(el("p", { class: "empty" }, ["This network is empty."]));
    return;
  }

  const width = 760;
  const height = 520;
  const positions = layoutNetwork(
    doc.nodes.map((n) => n.id),
    doc.edges,
    { width, height, seed: 7 },
  );
  const posOf = new Map(positions.map((p) => [p.id, p]));

  const svgNs = "http://www.w3.org/2000/svg";
  const svg = document.createElementNS(svgNs, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "network");

  for (const edge of doc.edges) {
    const a = posOf.get(edge.a);
    const b = posOf.get(edge.b);
    if (!a || !b) continue;
    const line = document.createElementNS(svgNs, "line");
    line.setAttribute("x1", String(a.x));
    line.setAttribute("y1", String(a.y));
    line.setAttribute("x2", String(b.x));
    line.setAttribute("y2", String(b.y));
    line.setAttribute("stroke-width", String(1 + 4 * edge.similarity));
    line.setAttribute("class", "edge");
    line.addEventListener("click", () => {
      void (async () => {
        try {
          // the edge-click view comes from the pair endpoint verbatim
          const payload = await client.getPair(name, edge.a, edge.b);
          state = withSelection(state, { kind: "edge", a: edge.a, b: edge.b });
          clear(panelBox);
          panelBox.append(renderEdgePanel(edgePanel(payload)));
        } catch (err) {
          showError(err);
        }
      })();
    });
    svg.append(line);
  }

  for (const node of doc.nodes) {
    const p = posOf.get(node.id);
    if (!p) continue;
    const group = document.createElementNS(svgNs, "g");
    const circle = document.createElementNS(svgNs, "circle");
    circle.setAttribute("cx", String(p.x));
    circle.setAttribute("cy", String(p.y));
    circle.setAttribute("r", "10");
    circle.setAttribute("class", "node");
    const label = document.createElementNS(svgNs, "text");
    label.setAttribute("x", String(p.x + 12));
    label.setAttribute("y", String(p.y + 4));
    label.textContent = node.id;
    group.append(circle, label);
    group.addEventListener("click", () => {
      state = withSelection(state, { kind: "node", id: node.id });
      clear(panelBox);
      panelBox.append(renderNodePanel(nodePanel(doc, node.id)));
    });
    svg.append(group);
  }

  box.append(svg);
  if (doc.edges.length === 0) {
    box.append(el("p", { class: "empty" }, ["No pairs reached the similarity threshold."]));
  }
}

async function onNetworkChosen(event: Event): Promise<void> {
  clearError();
  const select = event.target as HTMLSelectElement;
  if (!select.value) return;
  try {
    const doc = await client.getNetwork(select.value);
    renderNetwork(select.value, doc);
  } catch (err) {
    showError(err);
  }
}

function init(): void {
  byId("query-form").addEventListener("submit", (ev) => void onSubmit(ev));
  byId("network-select").addEventListener("change", (ev) => void onNetworkChosen(ev));
  void refreshLists().catch(showError);
  void loadNetworkNames().catch(showError);
}

document.addEventListener("DOMContentLoaded", init);
