// Assistant pane: summary requests against fitted topics. Deliberately not a
// free-form chat: it only relays topic summarization calls and shows the
// answer with its source badge.

import { api, ApiRequestError } from "../api.js";
import { clear, el } from "../render.js";
import type { ViewState } from "../state.js";

export function renderAssistantPane(container: HTMLElement, state: ViewState): void {
  clear(container);
  const modelSelect = el("select", {});
  const topicSelect = el("select", {});
  const modeSelect = el("select", {});
  modeSelect.append(
    el("option", { value: "extractive" }, ["extractive (offline)"]),
    el("option", { value: "remote" }, ["remote LLM"]),
  );
  const limitInput = el("input", { type: "number", value: "50", min: "10" });
  const askButton = el("button", { class: "primary" }, ["Summarize topic"]);
  const output = el("div", { class: "results" });

  const loadModels = async () => {
    const { models } = await api.models();
    clear(modelSelect);
    for (const model of models.filter((m) => m.status === "completed")) {
      modelSelect.append(el("option", { value: model.model_id }, [
        `${model.name || model.model_id} (${model.n_topics} topics)`,
      ]));
    }
    if (state.selectedModelId) modelSelect.value = state.selectedModelId;
    await loadTopics();
  };

  const loadTopics = async () => {
    clear(topicSelect);
    if (!modelSelect.value) return;
    const model = await api.model(modelSelect.value);
    for (const topic of model.topics) {
      topicSelect.append(el("option", { value: String(topic.topic_index) }, [
        `Topic ${topic.topic_index}: ${topic.top_terms.slice(0, 3).join(", ")}`,
      ]));
    }
  };

  askButton.addEventListener("click", async () => {
    clear(output);
    if (!modelSelect.value) {
      output.append(el("span", { class: "error" }, ["Fit a topic model first."]));
      return;
    }
    askButton.setAttribute("disabled", "true");
    try {
      const summary = await api.summarize(
        modelSelect.value,
        Number(topicSelect.value),
        modeSelect.value as "remote" | "extractive",
        Number(limitInput.value) || 50,
      );
      output.append(
        el("blockquote", { class: "summary" }, [
          summary.text,
          el("span", { class: `badge badge-${summary.source}` }, [` [${summary.source}]`]),
        ]),
      );
    } catch (err) {
      const text = err instanceof ApiRequestError ? `${err.code}: ${err.message}` : String(err);
      output.append(el("span", { class: "error" }, [text]));
    } finally {
      askButton.removeAttribute("disabled");
    }
  });
  modelSelect.addEventListener("change", () => void loadTopics());

  container.append(
    el("h2", {}, ["Assistant"]),
    el("p", { class: "meta" }, [
      "Condenses a topic's representative documents into a short summary. ",
      "Remote mode needs the service credential; extractive mode always works.",
    ]),
    el("div", { class: "query-bar" }, [
      el("label", { class: "inline" }, ["model ", modelSelect]),
      el("label", { class: "inline" }, ["topic ", topicSelect]),
      el("label", { class: "inline" }, ["mode ", modeSelect]),
      el("label", { class: "inline" }, ["word limit ", limitInput]),
      askButton,
    ]),
    output,
  );
  void loadModels();
}
