// Thin fetch client for /api/v1. Same-origin: the service serves this bundle
// under /ui and the API next to it.

import type {
  ChartPayload,
  ChoroplethRow,
  DocumentDetail,
  GeoEntity,
  GroupRow,
  JobRecord,
  ModelListRow,
  QueryResponse,
  SummaryResponse,
  TopicModelDetail,
} from "./types.js";

const BASE = "/api/v1";

export class ApiRequestError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public position?: number,
  ) {
    super(message);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(`${BASE}${path}`, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  const body = await resp.json();
  if (!resp.ok) {
    throw new ApiRequestError(
      resp.status,
      body.code ?? "Error",
      body.message ?? resp.statusText,
      body.position,
    );
  }
  return body as T;
}

export const api = {
  query: (q: string, offset = 0, limit = 20) =>
    request<QueryResponse>(
      `/query?q=${encodeURIComponent(q)}&offset=${offset}&limit=${limit}`,
    ),
  document: (docId: string) =>
    request<DocumentDetail>(`/documents/${encodeURIComponent(docId)}`),
  groups: () => request<{ groups: GroupRow[] }>("/groups"),
  createGroup: (name: string, query: string) =>
    request<{ group_id: string; member_count: number }>("/groups", {
      method: "POST",
      body: JSON.stringify({ name, query }),
    }),
  groupDocuments: (groupId: string, offset = 0, limit = 20) =>
    request<QueryResponse>(
      `/groups/${encodeURIComponent(groupId)}/documents?offset=${offset}&limit=${limit}`,
    ),
  models: () => request<{ models: ModelListRow[] }>("/topic-models"),
  model: (modelId: string) =>
    request<TopicModelDetail>(`/topic-models/${encodeURIComponent(modelId)}`),
  createTopicModel: (name: string, query: string, minClusterSize: number, seed?: number) =>
    request<{ job_id: string }>("/topic-models", {
      method: "POST",
      body: JSON.stringify({
        name,
        query,
        config: { min_cluster_size: minClusterSize },
        ...(seed !== undefined ? { seed } : {}),
      }),
    }),
  job: (jobId: string) => request<JobRecord>(`/jobs/${encodeURIComponent(jobId)}`),
  geo: (kind: "country" | "state" | "city") =>
    request<{ kind: string; total_docs: number; entities: GeoEntity[] }>(
      `/geo?kind=${kind}`,
    ),
  geoDocuments: (entryId: string, offset = 0, limit = 20) =>
    request<QueryResponse & { name: string; kind: string }>(
      `/geo/${encodeURIComponent(entryId)}/documents?offset=${offset}&limit=${limit}`,
    ),
  analyticsTop: (kind: string, n: number) =>
    request<ChartPayload>(`/analytics/top?kind=${kind}&n=${n}`),
  choropleth: () => request<{ rows: ChoroplethRow[] }>("/analytics/choropleth"),
  summarize: (modelId: string, topicIndex: number, mode: "remote" | "extractive", wordLimit = 50) =>
    request<SummaryResponse>(
      `/topics/${encodeURIComponent(modelId)}/${topicIndex}/summarize`,
      { method: "POST", body: JSON.stringify({ mode, word_limit: wordLimit }) },
    ),
};

export type Api = typeof api;
