// Replay of the remaining recorded endpoints: the console and summary panes
// must surface server-derived numbers and texts unchanged.

import { describe, expect, it } from "vitest";
import { readFileSync } from "node:fs";
import { join } from "node:path";

import type { QueryResponse, SummaryResponse, TopicModelDetail } from "../src/types.js";

const fixture = <T>(name: string): T =>
  JSON.parse(readFileSync(join(__dirname, "fixtures", `${name}.json`), "utf-8")) as T;

describe("query console fixture", () => {
  const resp = fixture<QueryResponse>("query_geo_canada");

  it("total equals the number of matching ids reported by the server", () => {
    expect(resp.total).toBeGreaterThan(0);
    expect(resp.doc_ids.length).toBe(Math.min(resp.total, resp.limit));
    expect(resp.documents.length).toBe(resp.doc_ids.length);
  });

  it("document summaries align with their ids", () => {
    for (let i = 0; i < resp.documents.length; i++) {
      expect(resp.documents[i].doc_id).toBe(resp.doc_ids[i]);
    }
  });
});

describe("topic model fixture", () => {
  const model = fixture<TopicModelDetail>("topic_model");

  it("is a completed model with consistent topic rows", () => {
    expect(model.status).toBe("completed");
    expect(model.topics.length).toBeGreaterThan(0);
    for (const topic of model.topics) {
      expect(topic.top_terms.length).toBe(topic.top_scores.length);
      expect(topic.top_terms.length).toBeLessThanOrEqual(10);
      expect(topic.member_count).toBeGreaterThan(0);
      expect(topic.representative_doc_ids.length).toBeGreaterThan(0);
    }
  });

  it("topics are ordered largest first", () => {
    const sizes = model.topics.map((t) => t.member_count);
    expect([...sizes].sort((a, b) => b - a)).toEqual(sizes);
  });
});

describe("summary fixture", () => {
  const summary = fixture<SummaryResponse>("summary");

  it("carries text and a truthful source badge", () => {
    expect(summary.text.length).toBeGreaterThan(0);
    expect(["remote", "extractive"]).toContain(summary.source);
  });
});
