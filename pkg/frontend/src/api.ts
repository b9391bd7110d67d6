/**
 * Typed client for the model service.  The UI does no latent-space math:
 * every number rendered comes from these responses verbatim.
 */

export class ApiError extends Error {
  constructor(
    readonly code: string,
    readonly detail: string,
    readonly status: number,
  ) {
    super(`${code}: ${detail}`);
    this.name = "ApiError";
  }
}

export interface ModelSummary {
  model_id: string;
  model_type: "words" | "images";
  shape: Record<string, number>;
}

export interface JobRecord {
  id: string;
  kind: string;
  status: "queued" | "running" | "done" | "failed";
  model_id: string | null;
  error: string | null;
}

export interface SliderSummary {
  slider_id: string;
  pole_a_label: string;
  pole_b_label: string;
}

export interface Association {
  word: string;
  similarity: number;
  coord: number;
}

export interface ProbeResult {
  t: number;
  probe_point: number[];
  associations?: Association[];
  image_pgm?: string;
}

export interface CloudPoint {
  label: string;
  x: number;
  y: number;
  coord: number | null;
}

export interface CloudAxis {
  pole_a_label: string;
  pole_b_label: string;
  a_xy: [number, number];
  b_xy: [number, number];
}

export interface PointCloud {
  points: CloudPoint[];
  axis: CloudAxis | null;
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(path, init);
  const body: unknown = await resp.json().catch(() => null);
  if (!resp.ok) {
    if (body && typeof body === "object" && "error" in body) {
      const e = body as { error: string; detail?: string };
      throw new ApiError(e.error, String(e.detail ?? ""), resp.status);
    }
    throw new ApiError("HttpError", `status ${resp.status}`, resp.status);
  }
  return body as T;
}

function post<T>(path: string, payload: unknown): Promise<T> {
  return request<T>(path, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(payload),
  });
}

export const api = {
  uploadCorpus: (text: string) =>
    post<{ corpus_id: string }>("/corpora", { text }),

  trainWords: (corpusId: string, config: Record<string, number>) =>
    post<{ job_id: string }>("/models/words", { corpus_id: corpusId, config }),

  trainImages: (classA: string[], classB: string[], q: number) =>
    post<{ job_id: string }>("/models/images", {
      class_a: classA,
      class_b: classB,
      q,
    }),

  job: (jobId: string) => request<JobRecord>(`/jobs/${jobId}`),

  models: () => request<ModelSummary[]>("/models"),

  sliders: (modelId: string) =>
    request<SliderSummary[]>(`/models/${modelId}/sliders`),

  createSlider: (
    modelId: string,
    poleA: string[],
    poleB: string[],
    labels: [string, string] | null,
  ) =>
    post<{ slider_id: string }>(
      `/models/${modelId}/sliders`,
      labels
        ? { pole_a: poleA, pole_b: poleB, labels }
        : { pole_a: poleA, pole_b: poleB },
    ),

  probe: (
    modelId: string,
    sliderId: string,
    t: number,
    base: string | null,
    k: number,
  ) => {
    const params = new URLSearchParams({ t: String(t) });
    if (base !== null) params.set("base", base);
    params.set("k", String(k));
    return request<ProbeResult>(
      `/models/${modelId}/sliders/${sliderId}/probe?${params.toString()}`,
    );
  },

  pointcloud: (modelId: string, sliderId: string | null, maxPoints: number) => {
    const params = new URLSearchParams({ max_points: String(maxPoints) });
    if (sliderId !== null) params.set("slider", sliderId);
    return request<PointCloud>(
      `/models/${modelId}/pointcloud?${params.toString()}`,
    );
  },
};
