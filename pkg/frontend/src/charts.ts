// Pure chart view-model builders. Every number rendered by the UI comes out
// of these functions unchanged from the API payloads — no client-side
// recomputation of counts or scales.

import type { ChartPayload, ChoroplethRow, TopicRow } from "./types.js";

export interface Bar {
  label: string;
  value: number;
  /** bar length as a fraction of the pane, relative to the max value */
  fraction: number;
}

export interface ShadedRegion {
  code: string;
  docCount: number;
  /** the API's log_value verbatim; the color scale input */
  value: number;
  /** 0..1 shade intensity relative to the maximum log_value */
  shade: number;
}

/** Top-N bar chart rows, in the exact order the API returned them. */
export function buildTopBars(payload: ChartPayload): Bar[] {
  const max = Math.max(...payload.counts, 1);
  return payload.labels.map((label, i) => ({
    label,
    value: payload.counts[i],
    fraction: payload.counts[i] / max,
  }));
}

/** Choropleth shading: log_value verbatim per country, plus a relative shade. */
export function buildChoropleth(rows: ChoroplethRow[]): ShadedRegion[] {
  const maxLog = Math.max(...rows.map((r) => r.log_value), 0);
  return rows.map((r) => ({
    code: r.country_code,
    docCount: r.doc_count,
    value: r.log_value,
    shade: maxLog > 0 ? r.log_value / maxLog : 0,
  }));
}

/** Per-topic keyword chart: at most 10 bars, score-sorted descending. */
export function buildTopicBars(topic: TopicRow): Bar[] {
  const pairs = topic.top_terms.map((term, i) => ({
    label: term,
    value: topic.top_scores[i],
  }));
  pairs.sort((a, b) => b.value - a.value || (a.label < b.label ? -1 : 1));
  const top = pairs.slice(0, 10);
  const max = Math.max(...top.map((p) => p.value), 1e-12);
  return top.map((p) => ({ ...p, fraction: p.value / max }));
}
