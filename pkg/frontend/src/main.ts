// Pane switching shell. Panes re-render on demand; switching away stops
// nothing except via explicit teardown of job polls on unload.

import { clear, el } from "./render.js";
import { initialState, stopAllPolls, type Pane, type ViewState } from "./state.js";
import { renderAssistantPane } from "./panes/assistant.js";
import { renderGeographyPane } from "./panes/geography.js";
import { renderGroupsPane } from "./panes/groups.js";
import { renderQueryPane } from "./panes/query.js";
import { renderTopicsPane } from "./panes/topics.js";

const PANES: { id: Pane; label: string }[] = [
  { id: "query", label: "Query" },
  { id: "groups", label: "Groups" },
  { id: "topic-models", label: "Topic models" },
  { id: "geography", label: "Geography" },
  { id: "assistant", label: "Assistant" },
];

const state: ViewState = initialState();

function renderPane(content: HTMLElement, pane: Pane): void {
  state.activePane = pane;
  switch (pane) {
    case "query":
      renderQueryPane(content, state);
      break;
    case "groups":
      renderGroupsPane(content, state);
      break;
    case "topic-models":
      renderTopicsPane(content, state);
      break;
    case "geography":
      renderGeographyPane(content, state);
      break;
    case "assistant":
      renderAssistantPane(content, state);
      break;
    default:
      clear(content);
  }
}

function boot(): void {
  const root = document.getElementById("app");
  if (!root) return;
  const nav = el("nav", { class: "tabs" });
  const content = el("main", { class: "pane" });
  for (const pane of PANES) {
    const tab = el("button", { class: "tab", "data-pane": pane.id }, [pane.label]);
    tab.addEventListener("click", () => {
      for (const other of nav.querySelectorAll(".tab")) other.classList.remove("active");
      tab.classList.add("active");
      renderPane(content, pane.id);
    });
    nav.append(tab);
  }
  root.append(el("header", {}, [el("h1", {}, ["geolit corpus explorer"])]), nav, content);
  (nav.firstElementChild as HTMLButtonElement | null)?.click();
  window.addEventListener("beforeunload", () => stopAllPolls(state));
}

boot();
