// Payload shapes of the /api/v1 endpoints the client consumes.

export interface DocSummary {
  doc_id: string;
  title: string;
  year: number | null;
  journal: string | null;
  geo_tags: string[];
  category_labels: string[];
}

export interface QueryResponse {
  total: number;
  doc_ids: string[];
  documents: DocSummary[];
  offset: number;
  limit: number;
}

export interface DocumentDetail extends DocSummary {
  abstract: string;
  authors: string[];
  doi: string | null;
  fields_of_study: string[];
  group_ids: string[];
  topics: Record<string, number>;
}

export interface GroupRow {
  group_id: string;
  name: string;
  member_count: number;
  created_at: string;
}

export interface JobRecord {
  job_id: string;
  kind: string;
  status: "queued" | "running" | "completed" | "failed";
  progress: number;
  created_at: string;
  finished_at: string | null;
  result_ref: string | null;
  error: string | null;
}

export interface TopicRow {
  topic_index: number;
  member_count: number;
  top_terms: string[];
  top_scores: number[];
  representative_doc_ids: string[];
  summary: string | null;
}

export interface TopicModelDetail {
  model_id: string;
  name: string;
  status: string;
  config: Record<string, unknown>;
  seed: number;
  n_docs: number;
  topics: TopicRow[];
}

export interface ModelListRow {
  model_id: string;
  name: string;
  status: string;
  seed: number;
  n_topics: number;
  n_docs: number;
}

export interface ChartPayload {
  labels: string[];
  counts: number[];
  log_values: number[];
  iso_codes: string[];
}

export interface ChoroplethRow {
  country_code: string;
  doc_count: number;
  log_value: number;
}

export interface GeoEntity {
  entry_id: string;
  name: string;
  doc_count: number;
  relative_frequency: number;
}

export interface SummaryResponse {
  topic_index: number;
  text: string;
  source: "remote" | "extractive";
  created_at: string;
}

export interface ApiError {
  code: string;
  message: string;
  position?: number;
}
