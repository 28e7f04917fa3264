// Topic-model workbench: create a model over the current query, watch the
// job chip progress, then render per-topic keyword charts and summaries.

import { api, ApiRequestError } from "../api.js";
import { buildTopicBars } from "../charts.js";
import { jobChip, pollJob } from "../jobs.js";
import { barRow, clear, el } from "../render.js";
import { trackPoll, type ViewState } from "../state.js";
import type { TopicModelDetail, TopicRow } from "../types.js";

export function renderTopicsPane(container: HTMLElement, state: ViewState): void {
  clear(container);
  const nameInput = el("input", { type: "text", placeholder: "model name" });
  const queryInput = el("input", {
    type: "text",
    placeholder: "scope query, e.g. geo:US-CA",
    value: state.queryText,
  });
  const sizeInput = el("input", { type: "number", value: "10", min: "2" });
  const createButton = el("button", { class: "primary" }, ["Fit topic model"]);
  const chipHolder = el("span", { class: "chip-holder" });
  const message = el("div", { class: "message" });
  const listing = el("div", { class: "results" });
  const detail = el("div", { class: "model-detail" });

  const refreshList = async () => {
    const { models } = await api.models();
    clear(listing);
    const table = el("table", { class: "rows" });
    table.append(el("tr", {}, [
      el("th", {}, ["id"]), el("th", {}, ["name"]), el("th", {}, ["status"]),
      el("th", {}, ["topics"]), el("th", {}, ["documents"]),
    ]));
    for (const model of models) {
      const open = el("a", { href: "#" }, [model.name || model.model_id]);
      open.addEventListener("click", (ev) => {
        ev.preventDefault();
        void openModel(model.model_id);
      });
      table.append(el("tr", {}, [
        el("td", {}, [model.model_id]),
        el("td", {}, [open]),
        el("td", {}, [model.status]),
        el("td", {}, [String(model.n_topics)]),
        el("td", {}, [String(model.n_docs)]),
      ]));
    }
    listing.append(table);
  };

  const openModel = async (modelId: string) => {
    state.selectedModelId = modelId;
    const model = await api.model(modelId);
    renderModel(model);
  };

  const renderModel = (model: TopicModelDetail) => {
    clear(detail);
    detail.append(el("h3", {}, [`${model.name} (${model.model_id}) — ${model.n_docs} documents`]));
    for (const topic of model.topics) {
      detail.append(renderTopicCard(model.model_id, topic));
    }
  };

  const renderTopicCard = (modelId: string, topic: TopicRow): HTMLElement => {
    const card = el("div", { class: "topic-card" });
    card.append(el("h4", {}, [`Topic ${topic.topic_index} (${topic.member_count} docs)`]));
    const chart = el("div", { class: "topic-chart" });
    for (const bar of buildTopicBars(topic)) {
      chart.append(barRow(bar.label, bar.value.toFixed(3), bar.fraction));
    }
    card.append(chart);

    const summaryHolder = el("div", { class: "summary-holder" });
    if (topic.summary) {
      summaryHolder.append(summaryBlock(topic.summary, "stored"));
    }
    const summarizeButton = el("button", {}, ["Summarize"]);
    summarizeButton.addEventListener("click", async () => {
      summarizeButton.setAttribute("disabled", "true");
      try {
        const summary = await api.summarize(modelId, topic.topic_index, "extractive");
        clear(summaryHolder);
        summaryHolder.append(summaryBlock(summary.text, summary.source));
      } catch (err) {
        const text = err instanceof ApiRequestError ? `${err.code}: ${err.message}` : String(err);
        summaryHolder.append(el("span", { class: "error" }, [text]));
      } finally {
        summarizeButton.removeAttribute("disabled");
      }
    });
    card.append(summarizeButton, summaryHolder);
    return card;
  };

  const summaryBlock = (text: string, source: string): HTMLElement =>
    el("blockquote", { class: "summary" }, [
      text,
      el("span", { class: `badge badge-${source}` }, [` [${source}]`]),
    ]);

  createButton.addEventListener("click", async () => {
    clear(message);
    clear(chipHolder);
    try {
      const { job_id } = await api.createTopicModel(
        nameInput.value, queryInput.value, Number(sizeInput.value) || 10,
      );
      const chipSpan = el("span", { class: "chip chip-queued" }, ["queued"]);
      chipHolder.append(chipSpan);
      const handle = pollJob(api.job, job_id, (job) => {
        const chip = jobChip(job);
        chipSpan.className = chip.className;
        chipSpan.textContent = chip.label;
        if (job.status === "completed" && job.result_ref) {
          void refreshList();
          void openModel(job.result_ref);
        }
        if (job.status === "failed") {
          message.append(el("span", { class: "error" }, [job.error ?? "job failed"]));
        }
      });
      trackPoll(state, job_id, handle);
    } catch (err) {
      const text = err instanceof ApiRequestError ? `${err.code}: ${err.message}` : String(err);
      message.append(el("span", { class: "error" }, [text]));
    }
  });

  container.append(
    el("h2", {}, ["Topic models"]),
    el("div", { class: "query-bar" }, [
      nameInput, queryInput,
      el("label", { class: "inline" }, ["min cluster size ", sizeInput]),
      createButton, chipHolder,
    ]),
    message,
    listing,
    detail,
  );
  void refreshList();
  if (state.selectedModelId) void openModel(state.selectedModelId);
}
