// Query console: submit a boolean query, page through hits, open documents.

import { api, ApiRequestError } from "../api.js";
import { clear, el } from "../render.js";
import type { ViewState } from "../state.js";
import type { DocSummary, QueryResponse } from "../types.js";

const PAGE_SIZE = 20;

export function renderQueryPane(container: HTMLElement, state: ViewState): void {
  clear(container);
  const input = el("input", {
    class: "query-input",
    type: "text",
    placeholder: 'e.g. geo:Nigeria AND drought, "sea level rise", year:2015-2020',
    value: state.queryText,
  });
  const button = el("button", { class: "primary" }, ["Search"]);
  const message = el("div", { class: "message" });
  const results = el("div", { class: "results" });
  const detail = el("div", { class: "doc-detail" });

  const run = async (offset: number) => {
    state.queryText = input.value;
    state.queryOffset = offset;
    clear(message);
    clear(detail);
    if (!input.value.trim()) return;
    try {
      const resp = await api.query(input.value, offset, PAGE_SIZE);
      renderResults(resp);
    } catch (err) {
      clear(results);
      if (err instanceof ApiRequestError) {
        const where = err.position !== undefined ? ` (at position ${err.position})` : "";
        message.append(el("span", { class: "error" }, [`${err.code}: ${err.message}${where}`]));
      } else {
        message.append(el("span", { class: "error" }, [String(err)]));
      }
    }
  };

  const renderResults = (resp: QueryResponse) => {
    clear(results);
    results.append(el("div", { class: "total" }, [`${resp.total} documents`]));
    const list = el("ul", { class: "doc-list" });
    for (const doc of resp.documents) {
      const link = el("a", { href: "#" }, [doc.title || doc.doc_id]);
      link.addEventListener("click", (ev) => {
        ev.preventDefault();
        void openDocument(doc);
      });
      list.append(el("li", {}, [
        link,
        el("span", { class: "meta" }, [doc.year ? ` (${doc.year})` : ""]),
      ]));
    }
    results.append(list);

    const nav = el("div", { class: "pager" });
    if (resp.offset > 0) {
      const prev = el("button", {}, ["Previous"]);
      prev.addEventListener("click", () => void run(resp.offset - PAGE_SIZE));
      nav.append(prev);
    }
    nav.append(el("span", { class: "page-info" }, [
      `${resp.total === 0 ? 0 : resp.offset + 1}-${Math.min(resp.offset + PAGE_SIZE, resp.total)} of ${resp.total}`,
    ]));
    if (resp.offset + PAGE_SIZE < resp.total) {
      const next = el("button", {}, ["Next"]);
      next.addEventListener("click", () => void run(resp.offset + PAGE_SIZE));
      nav.append(next);
    }
    results.append(nav);
  };

  const openDocument = async (doc: DocSummary) => {
    state.selectedDocId = doc.doc_id;
    const full = await api.document(doc.doc_id);
    clear(detail);
    detail.append(
      el("h3", {}, [full.title || full.doc_id]),
      el("p", { class: "meta" }, [
        [full.journal, full.year, full.authors.join(", ")].filter(Boolean).join(" · "),
      ]),
      el("p", {}, [full.abstract]),
      el("p", { class: "meta" }, [
        full.geo_tags.length ? `places: ${full.geo_tags.join(", ")}` : "no places tagged",
      ]),
    );
  };

  button.addEventListener("click", () => void run(0));
  input.addEventListener("keydown", (ev) => {
    if (ev.key === "Enter") void run(0);
  });

  container.append(
    el("h2", {}, ["Directly query the corpus"]),
    el("div", { class: "query-bar" }, [input, button]),
    message,
    results,
    detail,
  );
  if (state.queryText) void run(state.queryOffset);
}
