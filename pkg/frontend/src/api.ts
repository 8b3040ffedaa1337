// Thin typed client over the seaview API. Query strings are canonical
// (sorted keys) and concurrent identical requests share one in-flight fetch.

import type {
  BenchmarkSummary,
  Comparison,
  CompareInstanceDetail,
  ExperimentDetail,
  ExperimentSummary,
  InstanceDetail,
  InstancesPage,
  Summarization,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public code: string,
    message: string,
    public status: number,
  ) {
    super(message);
  }
}

export function canonicalUrl(path: string, params: Record<string, string> = {}): string {
  const entries = Object.entries(params).filter(([, v]) => v !== "");
  if (entries.length === 0) return path;
  entries.sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0));
  const query = new URLSearchParams(entries).toString();
  return `${path}?${query}`;
}

const inflight = new Map<string, Promise<unknown>>();

export async function getJson<T>(path: string, params: Record<string, string> = {}): Promise<T> {
  const url = canonicalUrl(path, params);
  const pending = inflight.get(url);
  if (pending) return pending as Promise<T>;
  const request = (async () => {
    try {
      const response = await fetch(url);
      const body = await response.json().catch(() => null);
      if (!response.ok) {
        const code = body && typeof body.code === "string" ? body.code : "http_error";
        const message = body && typeof body.message === "string" ? body.message : `HTTP ${response.status}`;
        throw new ApiError(code, message, response.status);
      }
      return body as T;
    } finally {
      inflight.delete(url);
    }
  })();
  inflight.set(url, request);
  return request as Promise<T>;
}

const LIST_PAGE_SIZE = "500";

export const api = {
  benchmarks: () => getJson<BenchmarkSummary[]>("/api/benchmarks"),
  experiments: (benchmarkId: string) =>
    getJson<ExperimentSummary[]>(`/api/benchmarks/${encodeURIComponent(benchmarkId)}/experiments`),
  experiment: (experimentId: string) =>
    getJson<ExperimentDetail>(`/api/experiments/${encodeURIComponent(experimentId)}`),
  instances: (experimentId: string, filters: { status?: string; group?: string } = {}) => {
    const params: Record<string, string> = { page_size: LIST_PAGE_SIZE };
    if (filters.status) params.status = filters.status;
    if (filters.group) params.group = filters.group;
    return getJson<InstancesPage>(
      `/api/experiments/${encodeURIComponent(experimentId)}/instances`,
      params,
    );
  },
  instance: (experimentId: string, instanceId: string, stepsPage = 1) => {
    const params: Record<string, string> = {};
    if (stepsPage > 1) params.steps_page = String(stepsPage);
    return getJson<InstanceDetail>(
      `/api/experiments/${encodeURIComponent(experimentId)}/instances/${encodeURIComponent(instanceId)}`,
      params,
    );
  },
  compare: (baseline: string, target: string) =>
    getJson<Comparison>("/api/compare", { baseline, target }),
  compareInstance: (baseline: string, target: string, id: string) =>
    getJson<CompareInstanceDetail>("/api/compare/instance", { baseline, target, id }),
  summarize: (experimentIds: string[]) =>
    getJson<Summarization>("/api/summarize", { experiments: experimentIds.join(",") }),
};
