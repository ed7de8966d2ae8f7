/** Typed client for the filtering service. All numbers shown in the UI come
 * from these responses; the client never recomputes filter semantics. */

export interface SummaryDoc {
  events: number;
  objects: number;
  object_types: number;
  relations: number;
  objects_per_type: Record<string, number>;
  events_per_type: Record<string, number>;
  events_per_activity: Record<string, number>;
  activity_ratio_per_type: Record<string, number>;
}

export interface MatrixCellDoc {
  object_type: string;
  activity: string;
  incidences: number;
  unique_objects: number;
  ratio: number;
  cooccurring: boolean;
}

export interface MatrixDoc {
  object_types: string[];
  activities: string[];
  cells: MatrixCellDoc[];
}

export interface DiffStepDoc {
  label: string;
  before: SummaryDoc;
  after: SummaryDoc;
  removed: Record<string, number>;
  retention_percent: Record<string, number>;
}

export interface DiffDoc {
  steps: DiffStepDoc[];
  overall: DiffStepDoc | null;
}

export interface EventRowDoc {
  id: string;
  activity: string;
  timestamp: string;
  omap: string[];
  otypes: string[];
}

export interface EventsPageDoc {
  total: number;
  offset: number;
  rows: EventRowDoc[];
}

export interface BlockDoc {
  index: number;
  events: number;
  first_event: string;
}

export interface SamplesDoc {
  strategy: string;
  blocks?: BlockDoc[];
  summary?: SummaryDoc;
  k?: number;
  seed?: number;
}

export interface UploadResponse {
  log_id: string;
  snapshot: number;
  summary: SummaryDoc;
}

export interface PipelineResponse {
  snapshot: number;
  diff: DiffDoc;
  summary: SummaryDoc;
}

export interface PipelineDescriptor {
  schema: "ocelkit-pipeline/1";
  steps: { kind: string; params: Record<string, unknown> }[];
}

let baseUrl = "";

/** Point the client at another origin (used by tests). */
export function setBaseUrl(url: string): void {
  baseUrl = url.replace(/\/$/, "");
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(baseUrl + path, init);
  if (!response.ok) {
    let detail = `${response.status} ${response.statusText}`;
    try {
      const body = (await response.json()) as { detail?: unknown };
      if (body.detail) {
        detail = Array.isArray(body.detail) ? body.detail.join("; ") : String(body.detail);
      }
    } catch {
      // non-JSON error body; keep the status line
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export function uploadLog(document: string): Promise<UploadResponse> {
  return request("/api/logs", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: document,
  });
}

export function fetchSummary(logId: string): Promise<{ snapshot: number; depth: number; summary: SummaryDoc }> {
  return request(`/api/logs/${logId}/summary`);
}

export function fetchMatrix(logId: string): Promise<{ snapshot: number; matrix: MatrixDoc }> {
  return request(`/api/logs/${logId}/matrix`);
}

export function fetchEvents(logId: string, offset: number, limit: number): Promise<EventsPageDoc> {
  return request(`/api/logs/${logId}/events?offset=${offset}&limit=${limit}`);
}

export function applyPipeline(logId: string, descriptor: PipelineDescriptor): Promise<PipelineResponse> {
  return request(`/api/logs/${logId}/pipeline`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(descriptor),
  });
}

export function undo(logId: string): Promise<{ snapshot: number; summary: SummaryDoc }> {
  return request(`/api/logs/${logId}/undo`, { method: "POST" });
}

export function fetchSamples(
  logId: string,
  strategy: string,
  k?: number,
  seed?: number,
): Promise<SamplesDoc> {
  const params = new URLSearchParams({ strategy });
  if (k !== undefined) params.set("k", String(k));
  if (seed !== undefined) params.set("seed", String(seed));
  return request(`/api/logs/${logId}/samples?${params}`);
}

export function exportUrl(logId: string): string {
  return `${baseUrl}/api/logs/${logId}/export`;
}

export function blockExportUrl(logId: string, block: number): string {
  return `${baseUrl}/api/logs/${logId}/samples/export?strategy=connected&block=${block}`;
}
