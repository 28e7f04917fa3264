// Group management: list existing groups, create one from the current query.

import { api, ApiRequestError } from "../api.js";
import { clear, el } from "../render.js";
import type { ViewState } from "../state.js";

export function renderGroupsPane(container: HTMLElement, state: ViewState): void {
  clear(container);
  const nameInput = el("input", { type: "text", placeholder: "group name" });
  const queryInput = el("input", {
    type: "text",
    placeholder: "query snapshot, e.g. geo:US-CA AND wildfire",
    value: state.queryText,
  });
  const createButton = el("button", { class: "primary" }, ["Create group"]);
  const message = el("div", { class: "message" });
  const listing = el("div", { class: "results" });

  const refresh = async () => {
    const { groups } = await api.groups();
    clear(listing);
    if (groups.length === 0) {
      listing.append(el("p", { class: "meta" }, ["No groups yet."]));
      return;
    }
    const table = el("table", { class: "rows" });
    table.append(el("tr", {}, [
      el("th", {}, ["id"]), el("th", {}, ["name"]), el("th", {}, ["documents"]),
    ]));
    for (const group of groups) {
      const open = el("a", { href: "#" }, [group.name]);
      open.addEventListener("click", async (ev) => {
        ev.preventDefault();
        const docs = await api.groupDocuments(group.group_id);
        clear(message);
        message.append(el("span", {}, [
          `${group.name}: ${docs.total} documents — ` +
          docs.documents.slice(0, 5).map((d) => d.title || d.doc_id).join("; "),
        ]));
      });
      table.append(el("tr", {}, [
        el("td", {}, [group.group_id]),
        el("td", {}, [open]),
        el("td", {}, [String(group.member_count)]),
      ]));
    }
    listing.append(table);
  };

  createButton.addEventListener("click", async () => {
    clear(message);
    try {
      const created = await api.createGroup(nameInput.value, queryInput.value);
      message.append(el("span", {}, [
        `created ${created.group_id} with ${created.member_count} documents`,
      ]));
      await refresh();
    } catch (err) {
      const text = err instanceof ApiRequestError ? `${err.code}: ${err.message}` : String(err);
      message.append(el("span", { class: "error" }, [text]));
    }
  });

  container.append(
    el("h2", {}, ["Groups"]),
    el("div", { class: "query-bar" }, [nameInput, queryInput, createButton]),
    message,
    listing,
  );
  void refresh();
}
