// Geography explorer: country choropleth (log-scale shading straight from
// the API), top-N bars per kind, and per-entity document lists.

import { api } from "../api.js";
import { buildChoropleth, buildTopBars } from "../charts.js";
import { barRow, clear, el } from "../render.js";
import type { ViewState } from "../state.js";

const KINDS = ["country", "state", "city"] as const;

export function renderGeographyPane(container: HTMLElement, state: ViewState): void {
  clear(container);
  const mapHolder = el("div", { class: "choropleth" });
  const barsHolder = el("div", { class: "geo-bars" });
  const docsHolder = el("div", { class: "results" });

  const kindSelect = el("select", {});
  for (const kind of KINDS) {
    kindSelect.append(el("option", { value: kind }, [kind]));
  }

  const renderMap = async () => {
    const { rows } = await api.choropleth();
    clear(mapHolder);
    mapHolder.append(el("h3", {}, ["Country choropleth (log scale)"]));
    const grid = el("div", { class: "map-grid" });
    for (const region of buildChoropleth(rows)) {
      const cell = el("div", {
        class: "map-cell",
        title: `${region.code}: ${region.docCount} docs (log ${region.value.toFixed(3)})`,
        "data-code": region.code,
        "data-log-value": String(region.value),
      }, [region.code]);
      // lighter shade = higher frequency, like the log-scaled map it mirrors
      const light = 25 + Math.round(region.shade * 65);
      cell.style.background = `hsl(215 60% ${light}%)`;
      cell.addEventListener("click", () => void openEntity(region.code));
      grid.append(cell);
    }
    mapHolder.append(grid);
  };

  const renderBars = async () => {
    const kind = kindSelect.value as (typeof KINDS)[number];
    const payload = await api.analyticsTop(kind, 10);
    clear(barsHolder);
    barsHolder.append(el("h3", {}, [`Top 10 ${kind} entities by document count`]));
    const bars = buildTopBars(payload);
    bars.forEach((bar, i) => {
      const row = barRow(bar.label, String(bar.value), bar.fraction);
      row.addEventListener("click", () => void openEntity(payload.iso_codes[i]));
      barsHolder.append(row);
    });
    if (bars.length === 0) {
      barsHolder.append(el("p", { class: "meta" }, ["No tagged documents for this kind."]));
    }
  };

  const openEntity = async (entryId: string) => {
    state.selectedGeoEntry = entryId;
    const docs = await api.geoDocuments(entryId);
    clear(docsHolder);
    docsHolder.append(el("h3", {}, [`${docs.name} (${docs.kind}) — ${docs.total} documents`]));
    const list = el("ul", { class: "doc-list" });
    for (const doc of docs.documents) {
      list.append(el("li", {}, [doc.title || doc.doc_id]));
    }
    docsHolder.append(list);
  };

  kindSelect.addEventListener("change", () => void renderBars());

  container.append(
    el("h2", {}, ["Geography"]),
    el("div", { class: "query-bar" }, [el("label", { class: "inline" }, ["kind ", kindSelect])]),
    mapHolder,
    barsHolder,
    docsHolder,
  );
  void renderMap();
  void renderBars();
}
