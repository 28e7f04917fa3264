// Client view state. One polling handle per job, tracked here so pane
// switches and terminal statuses can always tear timers down.

import type { PollHandle } from "./jobs.js";

export type Pane = "query" | "groups" | "topic-models" | "geography" | "assistant";

export interface ViewState {
  activePane: Pane;
  queryText: string;
  queryOffset: number;
  selectedDocId: string | null;
  selectedGeoEntry: string | null;
  selectedModelId: string | null;
  selectedTopicIndex: number | null;
  polls: Map<string, PollHandle>;
}

export function initialState(): ViewState {
  return {
    activePane: "query",
    queryText: "",
    queryOffset: 0,
    selectedDocId: null,
    selectedGeoEntry: null,
    selectedModelId: null,
    selectedTopicIndex: null,
    polls: new Map(),
  };
}

/** Register a poll handle for a job, stopping any previous one for that job. */
export function trackPoll(state: ViewState, jobId: string, handle: PollHandle): void {
  state.polls.get(jobId)?.stop();
  state.polls.set(jobId, handle);
}

export function stopAllPolls(state: ViewState): void {
  for (const handle of state.polls.values()) handle.stop();
  state.polls.clear();
}
