/**
 * Pure HTTP client for the generation service. The UI performs no layout
 * logic itself; everything goes through these endpoints.
 */

import {
  Diagnostic,
  JobState,
  ModelDoc,
  PresetName,
  ReportDoc,
  SketchDoc,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface SubmitOptions {
  preset: PresetName;
  seed?: number;
  coolingRate?: number;
}

export class ApiError extends Error {
  constructor(
    message: string,
    public status: number,
    public diagnostics: Diagnostic[] = [],
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private base = "http://127.0.0.1:7777",
    private fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    const response = await this.fetchImpl(`${this.base}${path}`, init);
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      const diags = (body as { diagnostics?: Diagnostic[] }).diagnostics ?? [];
      const detail = (body as { detail?: string }).detail ?? response.statusText;
      throw new ApiError(detail, response.status, diags);
    }
    return body;
  }

  async validate(sketch: SketchDoc): Promise<Diagnostic[]> {
    const body = (await this.request("/v1/sketch/validate", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(sketch),
    })) as { diagnostics: Diagnostic[] };
    return body.diagnostics;
  }

  async submit(sketch: SketchDoc, options: SubmitOptions): Promise<string> {
    const body = (await this.request("/v1/jobs", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({
        sketch,
        preset: options.preset,
        seed: options.seed ?? 0,
        coolingRate: options.coolingRate ?? 0.999,
      }),
    })) as { id: string };
    return body.id;
  }

  async jobState(id: string): Promise<JobState> {
    return (await this.request(`/v1/jobs/${id}`)) as JobState;
  }

  async model(id: string): Promise<ModelDoc> {
    return (await this.request(`/v1/jobs/${id}/model`)) as ModelDoc;
  }

  async report(id: string): Promise<ReportDoc> {
    return (await this.request(`/v1/jobs/${id}/report`)) as ReportDoc;
  }

  async cancel(id: string): Promise<void> {
    await this.request(`/v1/jobs/${id}`, { method: "DELETE" });
  }

  async catalog(): Promise<unknown> {
    return this.request("/v1/catalog");
  }

  /**
   * Poll a job until it reaches a terminal state, reporting progress along
   * the way. Polling backs off from `intervalMs` up to 8x.
   */
  async pollUntilDone(
    id: string,
    onProgress?: (state: JobState) => void,
    intervalMs = 100,
    sleep: (ms: number) => Promise<void> = (ms) =>
      new Promise((resolve) => setTimeout(resolve, ms)),
  ): Promise<JobState> {
    let wait = intervalMs;
    for (;;) {
      const state = await this.jobState(id);
      onProgress?.(state);
      if (state.state === "done" || state.state === "failed") {
        return state;
      }
      await sleep(wait);
      wait = Math.min(wait * 1.5, intervalMs * 8);
    }
  }
}
